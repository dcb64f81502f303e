#include "shaclup/prover.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <spdlog/spdlog.h>

#include "shaclup/error.hpp"

namespace shaclup {

namespace {

bool executable(const std::string& path) {
  struct stat st {};
  return ::stat(path.c_str(), &st) == 0 && S_ISREG(st.st_mode) && ::access(path.c_str(), X_OK) == 0;
}

std::optional<std::string> search_path(const std::string& name) {
  const char* env = std::getenv("PATH");
  if (!env) return std::nullopt;
  std::stringstream dirs(env);
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    if (dir.empty()) continue;
    std::string candidate = dir + "/" + name;
    if (executable(candidate)) return candidate;
  }
  return std::nullopt;
}

std::optional<std::string> locate(const std::string& spec) {
  if (spec.find('/') != std::string::npos) {
    if (executable(spec)) return spec;
    return std::nullopt;
  }
  return search_path(spec);
}

class TempFile {
 public:
  explicit TempFile(const std::string& contents) {
    std::string tmpl = (std::filesystem::temp_directory_path() / "shaclup-XXXXXX.p").string();
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    int fd = ::mkstemps(buf.data(), 2);
    if (fd < 0) throw Error(ErrorKind::Io, "cannot create a temporary problem file");
    path_ = buf.data();
    std::size_t off = 0;
    while (off < contents.size()) {
      ssize_t n = ::write(fd, contents.data() + off, contents.size() - off);
      if (n <= 0) {
        ::close(fd);
        throw Error(ErrorKind::Io, "cannot write " + path_);
      }
      off += static_cast<std::size_t>(n);
    }
    ::close(fd);
  }
  ~TempFile() { ::unlink(path_.c_str()); }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

std::vector<std::string> expand(const std::vector<std::string>& templ, const std::string& file,
                                double timeout_s) {
  const std::string secs = std::to_string(std::max<long>(1, std::lround(std::ceil(timeout_s))));
  std::vector<std::string> out;
  for (auto arg : templ) {
    for (auto [key, value] : {std::pair<std::string, std::string>{"{file}", file},
                              std::pair<std::string, std::string>{"{timeout}", secs}}) {
      for (std::size_t pos; (pos = arg.find(key)) != std::string::npos;)
        arg.replace(pos, key.size(), value);
    }
    out.push_back(arg);
  }
  return out;
}

constexpr double kGraceSeconds = 2.0;

}  // namespace

std::optional<std::string> resolve_prover(const ProverConfig& config) {
  if (!config.path.empty()) return locate(config.path);
  if (const char* env = std::getenv(kProverEnv); env && *env) return locate(env);
  return search_path("vampire");
}

std::string parse_szs(const std::string& output) {
  static const std::regex re(R"(SZS status\s+([A-Za-z]+))");
  std::string last;
  for (auto it = std::sregex_iterator(output.begin(), output.end(), re); it != std::sregex_iterator();
       ++it)
    last = (*it)[1].str();
  return last;
}

ProverRun run_prover(const ProverConfig& config, const std::string& problem) {
  std::optional<std::string> exe = resolve_prover(config);
  if (!exe)
    throw Error(ErrorKind::ProverUnavailable,
                "no prover found; pass --prover or set " + std::string(kProverEnv));
  TempFile file(problem);
  std::vector<std::string> args =
      expand(config.finite_models ? config.finite_args : config.args, file.path(), config.timeout_s);

  int pipefd[2];
  if (::pipe(pipefd) != 0) throw Error(ErrorKind::Io, "pipe failed");
  auto start = std::chrono::steady_clock::now();
  pid_t pid = ::fork();
  if (pid < 0) throw Error(ErrorKind::Io, "fork failed");
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(pipefd[1], STDOUT_FILENO);
    ::dup2(pipefd[1], STDERR_FILENO);
    ::close(pipefd[0]);
    ::close(pipefd[1]);
    std::vector<char*> argv;
    argv.push_back(const_cast<char*>(exe->c_str()));
    for (auto& a : args) argv.push_back(a.data());
    argv.push_back(nullptr);
    ::execv(exe->c_str(), argv.data());
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  ::close(pipefd[1]);

  ProverRun run;
  const auto deadline = start + std::chrono::duration<double>(config.timeout_s + kGraceSeconds);
  bool open = true;
  char buf[4096];
  while (open) {
    auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      run.timed_out = true;
      ::kill(-pid, SIGKILL);
      break;
    }
    int wait_ms = static_cast<int>(
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count()) + 1;
    pollfd pfd{pipefd[0], POLLIN, 0};
    int r = ::poll(&pfd, 1, std::min(wait_ms, 200));
    if (r > 0) {
      ssize_t n = ::read(pipefd[0], buf, sizeof buf);
      if (n > 0)
        run.output.append(buf, static_cast<std::size_t>(n));
      else
        open = false;
    }
  }
  ::close(pipefd[0]);
  int status = 0;
  if (!run.timed_out) {
    // Output closed; give the process the rest of the window to exit.
    while (::waitpid(pid, &status, WNOHANG) == 0) {
      if (std::chrono::steady_clock::now() >= deadline) {
        run.timed_out = true;
        ::kill(-pid, SIGKILL);
        ::waitpid(pid, &status, 0);
        break;
      }
      ::usleep(2000);
    }
  } else {
    ::waitpid(pid, &status, 0);
  }
  run.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (!run.timed_out && run.exit_code == 127 && run.output.empty())
    throw Error(ErrorKind::ProverUnavailable, "cannot execute " + *exe);
  run.szs = run.timed_out ? "Timeout" : parse_szs(run.output);
  return run;
}

std::string preservation_problem(const ShapesGraphPtr& s, const Action& ground_action,
                                 const fol::TranslateOptions& options) {
  Signature sig = signature_of(s, ground_action);
  fol::Sentence phi = fol::to_fol(s, sig, options);
  fol::Sentence regressed = fol::regress_fol(phi, ground_action, options);
  return fol::emit_tptp(fol::entailment_problem(phi, regressed));
}

ProverAnswer check_preserving_fol(const ShapesGraphPtr& s, const Action& a,
                                  const FolCheckOptions& options) {
  std::optional<std::string> exe = resolve_prover(options.prover);
  if (!exe)
    throw Error(ErrorKind::ProverUnavailable,
                "no prover found; pass --prover or set " + std::string(kProverEnv));
  if (options.translate.unroll)
    spdlog::warn("star is unrolled to {} steps; the first-order answer is an approximation",
                 *options.translate.unroll);

  ProverAnswer answer;
  answer.backend = "tptp:" + std::filesystem::path(*exe).filename().string();
  GroundingPlan plan = plan_groundings(s, a, options.max_groundings, options.fresh_nodes);
  const bool ground_already = is_ground(a);
  bool all_theorems = true;
  for (const auto& sigma : plan.groundings) {
    Action instance = ground_already ? a : ground(a, sigma);
    ProverRun run = run_prover(options.prover, preservation_problem(s, instance, options.translate));
    spdlog::debug("prover: {} in {:.0f} ms", run.szs.empty() ? "(no status)" : run.szs, run.wall_ms);
    if (run.szs == "CounterSatisfiable") {
      answer.status = ProverStatus::NotPreserved;
      answer.szs = run.szs;
      return answer;
    }
    // Contradictory axioms mean S has no model at all, so nothing can break.
    if (run.szs != "Theorem" && run.szs != "ContradictoryAxioms") {
      all_theorems = false;
      answer.szs = run.szs;
    }
  }
  if (all_theorems) {
    answer.szs = "Theorem";
    // Under the grounding cap only one instance was checked.
    answer.status = plan.heuristic ? ProverStatus::Unknown : ProverStatus::Preserved;
  }
  return answer;
}

}  // namespace shaclup
