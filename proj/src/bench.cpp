#include "shaclup/bench.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "shaclup/error.hpp"
#include "shaclup/json_io.hpp"

namespace shaclup::bench {

namespace {

class Generator {
 public:
  explicit Generator(const CaseSpec& spec) : spec_(spec), rng_(spec.seed) {}

  GeneratedCase run() {
    if (spec_.num_properties < 2)
      throw Error(ErrorKind::InvalidShapesGraph, "the generator needs at least two properties");
    GeneratedCase out;
    std::ostringstream id;
    id << "n" << spec_.num_shapes << "_a" << spec_.num_actions << "_s" << spec_.seed;
    out.id = id.str();

    std::vector<Constraint> constraints;
    std::vector<TargetPtr> targets;
    for (std::size_t i = 0; i < spec_.num_shapes; ++i) {
      std::string name = "s" + std::to_string(i + 1);
      targets.push_back(target::atom(selector(i % 4), name));
      constraints.push_back({name, body()});
    }
    out.shapes = graph::normal(std::move(constraints), target::all(std::move(targets)));

    std::vector<Step> steps;
    for (std::size_t i = 0; i < spec_.num_actions; ++i) steps.push_back(basic_action());
    out.action = action::seq(std::move(steps));
    return out;
  }

 private:
  // Modulo reduction keeps the stream identical across standard libraries.
  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  bool coin() { return pick(2) == 1; }

  std::string constant() { return "c" + std::to_string(pick(spec_.constants()) + 1); }
  std::string cls() { return "C" + std::to_string(pick(spec_.num_classes) + 1); }
  std::string property() { return "p" + std::to_string(pick(spec_.num_properties) + 1); }

  std::pair<std::string, std::string> two_properties() {
    std::string p = property();
    std::string q;
    do q = property();
    while (q == p);
    return {p, q};
  }

  ShapePtr filler() { return coin() ? shape::cls(cls()) : shape::node(constant()); }

  PathPtr path() {
    switch (pick(3)) {
      case 0: {
        auto [p, q] = two_properties();
        return path::seq(path::prop(p), path::prop(q));
      }
      case 1: {
        auto [p, q] = two_properties();
        return path::alt(path::prop(p), path::prop(q));
      }
      default:
        return path::star(path::prop(property()));
    }
  }

  ShapePtr selector(std::size_t kind) {
    switch (kind) {
      case 0: return shape::node(constant());
      case 1: return shape::cls(cls());
      case 2: return shape::exists(path::prop(property()));
      default: return shape::exists(path::inverse(property()));
    }
  }

  ShapePtr body() {
    switch (pick(3)) {
      case 0: {
        auto [p, q] = two_properties();
        return coin() ? shape::equals(path::prop(p), q) : shape::disjoint(path::prop(p), q);
      }
      case 1: {
        PathPtr p = path::prop(property());
        const bool min = coin();
        const auto n = static_cast<std::uint32_t>(pick(3));
        ShapePtr f = filler();
        if (min) return shape::at_least(std::max<std::uint32_t>(n, 1), p, f);
        return shape::not_(shape::at_least(n + 1, p, f));
      }
      default: {
        PathPtr e = path();
        if (coin()) return shape::exists(e, shape::node(constant()));
        return shape::forall(e, shape::cls(cls()));
      }
    }
  }

  BasicAction basic_action() {
    const bool add = coin();
    std::string p = property();
    PathPtr rhs = coin() ? path::pair(filler(), filler()) : path();
    return add ? action::add_prop(p, rhs) : action::del_prop(p, rhs);
  }

  const CaseSpec& spec_;
  std::mt19937_64 rng_;
};

std::string verdict_name(const Verdict& v) {
  if (std::holds_alternative<NotPreserving>(v)) return "not_preserving";
  if (std::holds_alternative<NoCounterexampleUpTo>(v)) return "no_counterexample";
  switch (std::get<ProverAnswer>(v).status) {
    case ProverStatus::Preserved: return "preserved";
    case ProverStatus::NotPreserved: return "not_preserving";
    case ProverStatus::Unknown: return "unknown";
  }
  return "unknown";
}

LinearFit fit_range(const std::vector<double>& xs, const std::vector<double>& ys, std::size_t from,
                    std::size_t to) {
  return fit_linear(std::vector<double>(xs.begin() + from, xs.begin() + to),
                    std::vector<double>(ys.begin() + from, ys.begin() + to));
}

}  // namespace

GeneratedCase gen_case(const CaseSpec& spec) { return Generator(spec).run(); }

std::string serialize_case(const GeneratedCase& c) {
  return to_json(c.shapes).dump() + "\n" + to_json(c.action).dump() + "\n";
}

std::vector<BenchRecord> run_suite(const std::vector<CaseSpec>& grid, const SuiteOptions& options) {
  std::vector<BenchRecord> out;
  for (const auto& point : grid) {
    for (std::size_t r = 0; r < options.repetitions; ++r) {
      CaseSpec spec = point;
      spec.seed = point.seed + r;
      GeneratedCase c = gen_case(spec);
      for (const auto& backend : options.backends) {
        BenchRecord rec{c.id, spec.seed, spec.num_shapes, spec.num_actions, backend, "", "ok", 0.0};
        auto start = std::chrono::steady_clock::now();
        try {
          if (backend == "bounded")
            rec.verdict = verdict_name(is_preserving_bounded(c.action, c.shapes, options.bounded));
          else if (backend == "fol")
            rec.verdict = verdict_name(check_preserving_fol(c.shapes, c.action, options.fol));
          else
            rec.status = "UnknownBackend";
        } catch (const Error& e) {
          rec.status = std::string(to_string(e.kind()));
        } catch (const std::exception&) {
          rec.status = "InternalError";
        }
        rec.wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        out.push_back(std::move(rec));
      }
    }
  }
  return out;
}

std::string to_csv(const std::vector<BenchRecord>& records) {
  std::ostringstream os;
  os << kCsvHeader << "\n";
  for (const auto& r : records)
    os << r.case_id << "," << r.seed << "," << r.num_shapes << "," << r.num_actions << ","
       << r.backend << "," << r.verdict << "," << r.status << "," << std::fixed
       << std::setprecision(3) << r.wall_ms << std::defaultfloat << "\n";
  return os.str();
}

std::vector<PointSummary> summarize(const std::vector<BenchRecord>& records) {
  std::vector<PointSummary> out;
  std::vector<std::size_t> preserving;
  for (const auto& r : records) {
    std::size_t i = 0;
    while (i < out.size() && !(out[i].num_shapes == r.num_shapes &&
                               out[i].num_actions == r.num_actions && out[i].backend == r.backend))
      ++i;
    if (i == out.size()) {
      out.push_back({r.num_shapes, r.num_actions, r.backend});
      preserving.push_back(0);
    }
    auto& p = out[i];
    if (r.status != "ok") {
      ++p.failed;
      continue;
    }
    p.mean_ms += r.wall_ms;
    ++p.runs;
    if (r.verdict == "no_counterexample" || r.verdict == "preserved") ++preserving[i];
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].runs == 0) continue;
    out[i].mean_ms /= static_cast<double>(out[i].runs);
    out[i].preserving = static_cast<double>(preserving[i]) / static_cast<double>(out[i].runs);
  }
  return out;
}

LinearFit fit_linear(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (xs.size() < 2 || sxx == 0) throw std::invalid_argument("fit_linear needs two distinct x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

ScalingReport scaling(const std::vector<double>& xs, const std::vector<double>& ys) {
  ScalingReport r;
  r.linear = fit_linear(xs, ys);
  const std::size_t n = xs.size();
  if (n >= 4) {
    const std::size_t mid = n / 2;
    // Halves share the middle point when n is odd.
    r.lower_slope = fit_range(xs, ys, 0, n % 2 ? mid + 1 : mid).slope;
    r.upper_slope = fit_range(xs, ys, mid, n).slope;
  } else {
    r.lower_slope = fit_range(xs, ys, 0, 2).slope;
    r.upper_slope = fit_range(xs, ys, n - 2, n).slope;
  }
  r.superlinear = r.upper_slope > r.lower_slope;
  return r;
}

std::string summary_text(const std::vector<PointSummary>& points) {
  std::ostringstream os;
  os << "shapes actions backend runs failed mean_ms preserving\n";
  for (const auto& p : points)
    os << p.num_shapes << " " << p.num_actions << " " << p.backend << " " << p.runs << " "
       << p.failed << " " << std::fixed << std::setprecision(3) << p.mean_ms << " "
       << std::setprecision(2) << p.preserving << std::defaultfloat << "\n";
  return os.str();
}

}  // namespace shaclup::bench
