// sepcheck: command-line front end.
//
//   sepcheck check FILE [--criteria LIST] [--tol T] [--seed S] [--out PATH]
//   sepcheck sweep --family NAME --grid SPEC [--criteria LIST] [--direction X,Y,Z] [--out PATH]
//   sepcheck audit --generator NAME --n N --seed S [--dims DA,DB] [--out PATH]
//   sepcheck decompose FILE --seed S [-L TERMS] [--iters N] [--restarts R] [--out PATH]
//
// Exit codes: 0 ok, 1 invalid state or runtime failure, 2 invalid
// configuration, 3 file not found, 4 parse error, 5 no certificate found.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "sepcheck/sepcheck.hpp"

namespace fs = std::filesystem;
using namespace sepcheck;

namespace {

enum ExitCode {
  kOk = 0,
  kRuntime = 1,
  kInvalidConfig = 2,
  kFileNotFound = 3,
  kParse = 4,
  kNoCertificate = 5,
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FileNotFound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  double tol = kTol;
  std::optional<Seed> seed;
  std::string criteria;
  std::string out;
  std::string input;
  std::string family;
  std::string grid;
  std::string direction;
  std::string generator;
  std::string dims = "2,2";
  long n = 0;
  int terms = kDefaultTerms;
  int iters = kDefaultSearchIterations;
  int restarts = kDefaultSearchRestarts;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(what + ": \"" + s + "\" is not a finite number");
  }
}

int to_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(what + ": \"" + s + "\" is not an integer");
  }
}

std::vector<CriterionId> parse_criteria_list(const std::string& list) {
  std::vector<CriterionId> out;
  for (const std::string& name : split(list, ',')) {
    try {
      const CriterionId id = parse_criterion(name);
      if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  if (out.empty()) throw ConfigError("--criteria is empty");
  return out;
}

/// "start:stop:steps" or an explicit comma list.
std::vector<double> parse_grid(const std::string& spec) {
  if (spec.empty()) throw ConfigError("--grid is required");
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3) throw ConfigError("--grid range must be start:stop:steps");
    const int steps = to_int(parts[2], "--grid steps");
    if (steps < 1) throw ConfigError("--grid steps must be >= 1");
    return linear_grid(to_double(parts[0], "--grid start"), to_double(parts[1], "--grid stop"), steps);
  }
  std::vector<double> out;
  for (const std::string& item : split(spec, ',')) out.push_back(to_double(item, "--grid"));
  return out;
}

BipartiteDims parse_dims(const std::string& spec) {
  const auto parts = split(spec, ',');
  if (parts.size() != 2) throw ConfigError("--dims must be DA,DB");
  const BipartiteDims dims{to_int(parts[0], "--dims"), to_int(parts[1], "--dims")};
  if (dims.dA < 2 || dims.dB < 2 || dims.dA > 8 || dims.dB > 8) throw ConfigError("--dims entries must lie in [2, 8]");
  return dims;
}

std::string read_file(const std::string& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw FileNotFound("file not found: " + path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Writes to a sibling temp file, then renames over the target.
void write_atomically(const std::string& path, const std::string& content) {
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path + ": " + ec.message());
  }
}

void emit(const Options& o, const std::string& content) {
  if (o.out.empty()) {
    std::cout << content;
  } else {
    write_atomically(o.out, content);
  }
}

EvalOptions eval_options(const Options& o) {
  EvalOptions e;
  e.tol = o.tol;
  e.seed = o.seed.value_or(0);
  return e;
}

LoadedState load_state(const Options& o) { return parse_state(read_file(o.input), o.tol); }

int run_check(const Options& o) {
  const LoadedState state = load_state(o);
  const BipartiteDims dims = state.rho.dims();
  const bool have_pure = state.pure.has_value();

  std::vector<CriterionId> criteria;
  if (o.criteria.empty()) {
    criteria = applicable_criteria(dims, have_pure);
  } else {
    criteria = parse_criteria_list(o.criteria);
    for (CriterionId id : criteria) {
      if (!applicable(id, dims, have_pure)) {
        throw ConfigError(criterion_name(id) + " does not apply to a " + std::string(have_pure ? "pure " : "mixed ") +
                          std::to_string(dims.dA) + "x" + std::to_string(dims.dB) + " input");
      }
    }
  }

  const EvalOptions eval = eval_options(o);
  std::vector<SweepRow> rows;
  bool entangled = false, separable = false;
  for (CriterionId id : criteria) {
    const CriterionVerdict v = evaluate(id, state.rho, have_pure ? &*state.pure : nullptr, eval);
    rows.push_back({"check", 0.0, v.criterion, v.statistic, v.threshold, v.verdict});
    // Every Entangled verdict is a proof; Separable is only ever emitted by
    // criteria exact at these dims.
    entangled = entangled || v.verdict == Verdict::Entangled;
    separable = separable || (v.verdict == Verdict::Separable && exact_for(id, dims));
  }
  emit(o, render_rows(rows));
  std::cout << (entangled ? "ENTANGLED" : separable ? "SEPARABLE" : "INCONCLUSIVE") << "\n";
  return kOk;
}

int run_sweep(const Options& o) {
  FamilySpec spec;
  try {
    spec.family = parse_family(o.family);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  spec.grid = parse_grid(o.grid);
  if (!o.direction.empty()) {
    if (spec.family != Family::BellDiagonal) throw ConfigError("--direction only applies to bell_diagonal");
    const auto parts = split(o.direction, ',');
    if (parts.size() != 3) throw ConfigError("--direction must be X,Y,Z");
    for (int i = 0; i < 3; ++i) spec.direction(i) = to_double(parts[i], "--direction");
  }
  const bool pure_family = spec.family == Family::PureSchmidtAngle;
  std::vector<CriterionId> criteria = family_criteria(spec.family);
  if (!o.criteria.empty()) {
    criteria = parse_criteria_list(o.criteria);
    for (CriterionId id : criteria) {
      if (!applicable(id, {2, 2}, pure_family)) {
        throw ConfigError(criterion_name(id) + " does not apply to family " + o.family);
      }
    }
  }
  SweepReport report;
  try {
    report = sweep(spec, criteria, eval_options(o));
  } catch (const Error& e) {
    // Grid points outside the family's range are a configuration problem.
    if (e.kind() == ErrorKind::OutOfRange) throw ConfigError(e.what());
    throw;
  }
  emit(o, render_report(report));
  for (const auto& [name, at] : report.crossings) std::cerr << "crossing " << name << " " << format_number(at) << "\n";
  return kOk;
}

int run_audit(const Options& o) {
  if (!o.seed) throw ConfigError("audit requires --seed");
  if (o.n < 1) throw ConfigError("--n must be >= 1");
  Generator generator;
  try {
    generator = parse_generator(o.generator);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  const BipartiteDims dims = parse_dims(o.dims);
  if (generator != Generator::Separable && !(std::min(dims.dA, dims.dB) == 2 && std::max(dims.dA, dims.dB) <= 3)) {
    throw ConfigError("oracle-labeled audits need dims 2,2 or 2,3");
  }
  emit(o, render_audit(audit(o.n, *o.seed, generator, dims, eval_options(o))));
  return kOk;
}

int run_decompose(const Options& o) {
  if (!o.seed) throw ConfigError("decompose requires --seed");
  if (o.terms < 1) throw ConfigError("--terms must be >= 1");
  if (o.iters < 1 || o.restarts < 1) throw ConfigError("--iters and --restarts must be >= 1");
  const LoadedState state = load_state(o);
  if (state.rho.dims() != BipartiteDims{2, 2}) throw ConfigError("decompose supports two qubits only");

  const SearchResult result = liqiao_search(state.rho, {o.terms, o.iters, o.restarts, *o.seed});
  const Residuals& res = result.best_residuals;
  std::ostringstream summary;
  summary << "residuals dr=" << format_number(res.dr) << " ds=" << format_number(res.ds)
          << " dtau=" << format_number(res.dtau) << " restarts=" << result.restarts_run;
  if (!result.certificate) {
    std::cerr << summary.str() << "\nno certificate found (not evidence of entanglement)\n";
    return kNoCertificate;
  }
  emit(o, serialize_candidate(*result.certificate));
  std::cerr << summary.str() << " terms=" << result.certificate->size() << "\n";
  std::cout << "CERTIFIED\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement criteria checker for bipartite density matrices"};
  app.require_subcommand(1);
  Options o;

  const auto add_common = [&o](CLI::App* cmd) {
    cmd->add_option("--tol", o.tol, "Shared comparison tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--out", o.out, "Write the report here instead of stdout");
  };
  const auto add_seed = [&o](CLI::App* cmd) {
    cmd->add_option_function<Seed>("--seed", [&o](const Seed& s) { o.seed = s; }, "Random seed");
  };

  CLI::App* check = app.add_subcommand("check", "Run the criteria battery on one state file");
  check->add_option("file", o.input, "State file")->required();
  check->add_option("--criteria", o.criteria, "Comma-separated criteria (default: all applicable)");
  add_common(check);
  add_seed(check);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Evaluate criteria across a state family");
  sweep_cmd->add_option("--family", o.family, "werner, rho_p, bell_diagonal or pure_schmidt_angle")->required();
  sweep_cmd->add_option("--grid", o.grid, "start:stop:steps or a comma list")->required();
  sweep_cmd->add_option("--criteria", o.criteria, "Comma-separated criteria (default: all applicable)");
  sweep_cmd->add_option("--direction", o.direction, "Bell-diagonal direction X,Y,Z");
  add_common(sweep_cmd);
  add_seed(sweep_cmd);

  CLI::App* audit_cmd = app.add_subcommand("audit", "Randomized audit against the PPT oracle");
  audit_cmd->add_option("--generator", o.generator, "separable, mixed or pure")->required();
  audit_cmd->add_option("--n", o.n, "Number of samples")->required();
  audit_cmd->add_option("--dims", o.dims, "Subsystem dimensions DA,DB");
  add_common(audit_cmd);
  add_seed(audit_cmd);

  CLI::App* decompose = app.add_subcommand("decompose", "Search for a separable decomposition certificate");
  decompose->add_option("file", o.input, "State file")->required();
  decompose->add_option("-L,--terms", o.terms, "Number of product terms");
  decompose->add_option("--iters", o.iters, "Iterations per restart");
  decompose->add_option("--restarts", o.restarts, "Number of restarts");
  add_common(decompose);
  add_seed(decompose);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalidConfig;
  }

  try {
    if (*check) return run_check(o);
    if (*sweep_cmd) return run_sweep(o);
    if (*audit_cmd) return run_audit(o);
    return run_decompose(o);
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kInvalidConfig;
  } catch (const FileNotFound& e) {
    std::cerr << e.what() << "\n";
    return kFileNotFound;
  } catch (const ParseError& e) {
    std::cerr << o.input << ": " << e.what() << "\n";
    return kParse;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
}
