// pde2ode: command-line front end.
//
//   pde2ode rif FILE            solved form
//   pde2ode initdata FILE       parametric derivatives and finiteness
//   pde2ode ode FILE            parametric ODE systems and compatibility
//   pde2ode integrate FILE ...  RK4 along a line with projection
//   pde2ode polysolve FILE      roots of a zero-dimensional polynomial system
//   pde2ode liestructure FILE   structure constants of a symmetry algebra
//   pde2ode probe FILE          consistency of the pivot = 0 branches
//
// Exit codes: 0 success, 1 usage, 2 parse or I/O error, 3 inconsistent,
// 4 infinite-dimensional, 5 numerical or computational failure, 6 iteration
// cap reached under --strict.

#include "pde2ode/dae.hpp"
#include "pde2ode/error.hpp"
#include "pde2ode/json_io.hpp"
#include "pde2ode/lie.hpp"
#include "pde2ode/render.hpp"
#include "pde2ode/zero_dim.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace pde2ode;

namespace {

struct CapReached {};

enum Exit { kOk = 0, kUsage = 1, kParse = 2, kInconsistent = 3, kInfinite = 4, kNumerical = 5, kCapped = 6 };

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Usage: return kUsage;
    case ErrorCode::Syntax:
    case ErrorCode::UnknownSymbol:
    case ErrorCode::BadArity:
    case ErrorCode::Io: return kParse;
    case ErrorCode::Inconsistent: return kInconsistent;
    case ErrorCode::Infinite: return kInfinite;
    default: return kNumerical;
  }
}

struct Config {
  std::string input;
  std::string output;
  std::string format = "text";
  int cap = 4;
  bool strict = false;
  // integrate
  std::string state;
  std::string from;
  std::string dir;
  double h = 0.01;
  int steps = 100;
  bool no_project = false;
  double guard = 1e-8;
  std::string trajectory;
  int continue_from = -1;
  // polysolve
  double tol = 1e-8;
  std::uint64_t seed = SolveOptions{}.seed;
  // liestructure
  std::string vf;
  std::string point;
  std::string basis;
  int order = -1;
  // probe
  int pivot = 0;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
  }
  return out;
}

double parse_number(const std::string& s) {
  try {
    return parse_rational(s).get_d();
  } catch (const Error&) {
    throw Error(ErrorCode::Usage, "'" + s + "' is not a number");
  }
}

/// "a=1,b=2" by name or "1,2" positionally.
std::vector<double> parse_values(const std::string& text, const std::vector<std::string>& names, const char* what) {
  std::vector<std::string> items = split_list(text);
  std::vector<double> out(names.size(), 0.0);
  std::vector<bool> seen(names.size(), false);
  if (items.size() != names.size())
    throw Error(ErrorCode::Usage, std::string(what) + " needs " + std::to_string(names.size()) + " values");
  for (std::size_t k = 0; k < items.size(); ++k) {
    auto eq = items[k].find('=');
    std::size_t slot = k;
    std::string value = items[k];
    if (eq != std::string::npos) {
      std::string name = items[k].substr(0, eq);
      while (!name.empty() && name.back() == ' ') name.pop_back();
      auto it = std::find(names.begin(), names.end(), name);
      if (it == names.end()) throw Error(ErrorCode::Usage, std::string("unknown name '") + name + "' in " + what);
      slot = static_cast<std::size_t>(it - names.begin());
      value = items[k].substr(eq + 1);
    }
    if (seen[slot]) throw Error(ErrorCode::Usage, std::string("duplicate entry in ") + what);
    seen[slot] = true;
    out[slot] = parse_number(value);
  }
  return out;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
    }
  }
  std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void require_format(const Config& cfg, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed)
    if (cfg.format == f) return;
  throw Error(ErrorCode::Usage, "format '" + cfg.format + "' is not available for this command");
}

std::string text(const DiffPolynomial& p, const Signature& sig, const TermOrder& order) {
  return render(p, sig, DerivativeStyle::Compact, order);
}

void print_rif_text(std::ostream& os, const RifForm& f) {
  const auto& sig = f.signature;
  TermOrder order = f.ranking.term_order();
  os << "status: " << (f.status == RifStatus::Complete ? "complete" : "iteration_capped") << "\n";
  os << "rules:\n";
  for (const auto& r : f.rules)
    os << "  " << compact_name(r.lead, sig) << " = " << render(r.rhs, sig, DerivativeStyle::Compact, order) << "\n";
  os << "constraints:\n";
  for (const auto& c : f.constraints) os << "  " << text(c, sig, order) << " = 0\n";
  os << "inequations:\n";
  for (const auto& g : f.inequations) os << "  " << text(g, sig, order) << " != 0\n";
}

void print_ode_text(std::ostream& os, const ParametricOdeSystem& p, const CompatibilityReport& rep) {
  const auto& sig = p.state_signature;
  TermOrder order = p.state_order();
  os << "states:";
  for (const auto& n : p.state_names()) os << " " << n;
  os << "\n";
  for (std::size_t i = 0; i < p.n_indep(); ++i) {
    os << "d/d" << sig.indep_names[i] << ":\n";
    for (std::size_t k = 0; k < p.n_states(); ++k)
      os << "  " << p.state_names()[k] << "' = " << render(p.odes[i][k], sig, DerivativeStyle::Compact, order) << "\n";
  }
  os << "constraints:\n";
  for (const auto& c : p.constraints) os << "  " << text(c, sig, order) << " = 0\n";
  os << "inequations:\n";
  for (const auto& g : p.inequations) os << "  " << text(g, sig, order) << " != 0\n";
  os << "compatibility: " << (rep.compatible() ? "compatible" : "incompatible") << " (" << rep.checks << " checks)\n";
  for (const auto& r : rep.residuals)
    os << "  residual " << render(r.residual, sig, DerivativeStyle::Compact, order) << "\n";
}

// A file without functions is a polynomial system, read through x_j <-> d/dx_j.
SystemSource load_differential(const Config& cfg) {
  SystemSource src = load_system(cfg.input);
  return src.signature.n_dep() == 0 ? poly_to_diff(src) : src;
}

RifForm load_and_complete(const Config& cfg) {
  RifForm f = rif(load_differential(cfg), cfg.cap);
  if (f.status == RifStatus::IterationCapped) {
    if (cfg.strict) throw CapReached{};
    std::cerr << "warning: iteration cap reached, the result may be incomplete\n";
  }
  return f;
}

int run_rif(const Config& cfg, Output& out) {
  require_format(cfg, {"text", "json"});
  RifForm f = load_and_complete(cfg);
  if (cfg.format == "json") {
    out.os() << to_json(f).dump(2) << "\n";
  } else {
    print_rif_text(out.os(), f);
  }
  return kOk;
}

int run_initdata(const Config& cfg, Output& out) {
  require_format(cfg, {"text", "json"});
  RifForm f = load_and_complete(cfg);
  Staircase s = leading_set(f);
  if (!is_finite_dimensional(s)) {
    if (cfg.format == "json") {
      Json j{{"schema", kSchema}, {"finite_dimensional", false}};
      out.os() << j.dump(2) << "\n";
    } else {
      out.os() << "finite-dimensional: no\n";
    }
    return kInfinite;
  }
  InitialData id = parametric_derivatives(f);
  if (cfg.format == "json") {
    out.os() << to_json(f, id).dump(2) << "\n";
    return kOk;
  }
  auto& os = out.os();
  os << "finite-dimensional: yes\n";
  os << "dimension: " << id.dimension() << "\n";
  os << "parametric:";
  for (const auto& d : id.parametric) os << " " << compact_name(d, f.signature);
  os << "\ninitial data:\n";
  std::string at = "(";
  for (std::size_t i = 0; i < id.point_symbols.size(); ++i) at += (i ? ", " : "") + id.point_symbols[i];
  at += ")";
  for (std::size_t k = 0; k < id.parametric.size(); ++k)
    os << "  " << compact_name(id.parametric[k], f.signature) << at << " = " << id.constants[k] << "\n";
  TermOrder order = f.ranking.term_order();
  os << "constraints among parametric derivatives:\n";
  for (const auto& c : constraints_among_parametric(f, id)) os << "  " << text(c, f.signature, order) << " = 0\n";
  return kOk;
}

int run_ode(const Config& cfg, Output& out) {
  require_format(cfg, {"text", "json"});
  RifForm f = load_and_complete(cfg);
  ParametricOdeSystem p = reduce_to_parametric_ode(f);
  CompatibilityReport rep = check_formal_compatibility(p);
  if (cfg.format == "json") {
    out.os() << to_json(p, &rep).dump(2) << "\n";
  } else {
    print_ode_text(out.os(), p, rep);
  }
  return kOk;
}

int run_integrate(const Config& cfg, Output& out) {
  require_format(cfg, {"text", "json", "csv"});
  RifForm f = load_and_complete(cfg);
  ParametricOdeSystem p = reduce_to_parametric_ode(f);
  const auto& indep = p.state_signature.indep_names;
  CurveSpec c;
  std::vector<double> v0;
  if (cfg.continue_from >= 0) {
    if (cfg.trajectory.empty()) throw Error(ErrorCode::Usage, "--continue-from needs --trajectory");
    std::ifstream in(cfg.trajectory);
    if (!in) throw Error(ErrorCode::Io, "cannot read '" + cfg.trajectory + "'");
    Json j;
    try {
      j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::Syntax, std::string("malformed trajectory: ") + e.what());
    }
    Trajectory prev = trajectory_from_json(j);
    if (static_cast<std::size_t>(cfg.continue_from) >= prev.samples.size())
      throw Error(ErrorCode::Usage, "trajectory has no sample " + std::to_string(cfg.continue_from));
    if (prev.state_names != p.state_names() || prev.indep_names != indep)
      throw Error(ErrorCode::Usage, "trajectory does not belong to this system");
    c.start = prev.samples[static_cast<std::size_t>(cfg.continue_from)].x;
    v0 = prev.samples[static_cast<std::size_t>(cfg.continue_from)].v;
  } else {
    if (cfg.state.empty()) throw Error(ErrorCode::Usage, "--state is required");
    v0 = parse_values(cfg.state, p.state_names(), "--state");
    c.start = cfg.from.empty() ? std::vector<double>(indep.size(), 0.0) : parse_values(cfg.from, indep, "--from");
  }
  if (cfg.dir.empty()) throw Error(ErrorCode::Usage, "--dir is required");
  c.direction = parse_values(cfg.dir, indep, "--dir");
  c.h = cfg.h;
  c.steps = cfg.steps;
  IntegrateOptions opt;
  opt.project = !cfg.no_project;
  opt.guard = cfg.guard;
  Trajectory t = integrate_along_curve(p, c, v0, opt);
  if (cfg.format == "json") {
    out.os() << to_json(t).dump(2) << "\n";
  } else if (cfg.format == "csv") {
    out.os() << trajectory_csv(t);
  } else {
    double drift = 0;
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& s : t.samples) {
      drift = std::max(drift, s.drift);
      margin = std::min(margin, s.pivot_margin);
    }
    auto& os = out.os();
    os << "samples: " << t.samples.size() << "\n";
    os << "max drift: " << drift << "\n";
    os << "min pivot: " << margin << "\n";
    os << "final state:";
    const Sample& last = t.samples.back();
    os << std::setprecision(12);
    for (std::size_t i = 0; i < indep.size(); ++i) os << " " << indep[i] << "=" << last.x[i];
    for (std::size_t k = 0; k < last.v.size(); ++k) os << " " << t.state_names[k] << "=" << last.v[k];
    os << "\n";
  }
  return kOk;
}

int run_polysolve(const Config& cfg, Output& out) {
  require_format(cfg, {"text", "json"});
  if (!(cfg.tol > 0)) throw Error(ErrorCode::Usage, "--tol must be positive");
  SystemSource polys = load_system(cfg.input);
  RifForm f = rif(poly_to_diff(polys), cfg.cap);
  if (f.status == RifStatus::IterationCapped && cfg.strict) throw CapReached{};
  MultiplicationSystem ms = build_multiplication_matrices(reduce_to_parametric_ode(f));
  RootSet rs = solve_zero_dim(ms, polys, SolveOptions{cfg.tol, cfg.seed});
  if (cfg.format == "json") {
    out.os() << to_json(ms, rs).dump(2) << "\n";
    return kOk;
  }
  auto& os = out.os();
  os << "dimension: " << ms.dimension() << "\n";
  os << "matrices commute: yes\n";
  os << "distinct roots: " << rs.roots.size() << "\n";
  os << std::setprecision(12);
  for (const auto& r : rs.roots) {
    os << " ";
    for (std::size_t i = 0; i < r.coords.size(); ++i) {
      os << " " << polys.signature.indep_names[i] << "=";
      if (r.coords[i].imag() == 0) {
        os << r.coords[i].real();
      } else if (r.coords[i].real() == 0) {
        os << r.coords[i].imag() << "i";
      } else {
        os << r.coords[i].real() << (r.coords[i].imag() < 0 ? "-" : "+") << std::abs(r.coords[i].imag()) << "i";
      }
    }
    os << "  multiplicity " << r.multiplicity << "  residual " << std::setprecision(3) << r.residual
       << std::setprecision(12) << "\n";
  }
  return kOk;
}

int run_liestructure(const Config& cfg, Output& out) {
  require_format(cfg, {"text", "json"});
  RifForm f = load_and_complete(cfg);
  InitialData id = parametric_derivatives(f);
  if (cfg.vf.empty()) throw Error(ErrorCode::Usage, "--vf is required");
  if (cfg.point.empty()) throw Error(ErrorCode::Usage, "--point is required");
  VectorFieldSpec vf = VectorFieldSpec::parse(cfg.vf, f.signature);
  std::vector<Rational> point = parse_point(cfg.point, f.signature);
  StructureOptions opt;
  if (!cfg.basis.empty()) opt.basis_order = split_list(cfg.basis);
  StructureConstants sc = structure_constants(f, id, vf, point, opt);
  if (cfg.format == "json") {
    out.os() << to_json(sc, cfg.order).dump(2) << "\n";
    return kOk;
  }
  auto& os = out.os();
  os << "basis:";
  for (std::size_t k = 0; k < sc.m; ++k) os << " X_" << k + 1 << "<->" << sc.basis_names[k];
  os << "\nbrackets:\n";
  auto show = [&](const auto& coeff_text, std::size_t i, std::size_t j) {
    std::string rhs;
    for (std::size_t k = 0; k < sc.m; ++k) {
      std::string c = coeff_text(i, j, k);
      if (c == "0") continue;
      if (!rhs.empty()) rhs += " + ";
      rhs += (c == "1" ? "" : "(" + c + ")*") + "X_" + std::to_string(k + 1);
    }
    return rhs.empty() ? std::string("0") : rhs;
  };
  for (std::size_t i = 0; i < sc.m; ++i)
    for (std::size_t j = i + 1; j < sc.m; ++j) {
      std::string sym = show([&](std::size_t a, std::size_t b, std::size_t k) {
        return render(sc.symbolic[a][b][k], sc.point_signature);
      }, i, j);
      std::string val = show([&](std::size_t a, std::size_t b, std::size_t k) { return to_string(sc.values[a][b][k]); }, i, j);
      os << "  [X_" << i + 1 << ", X_" << j + 1 << "] = " << sym;
      if (sym != val) os << "  =  " << val << " at the point";
      os << "\n";
    }
  os << "derived algebra dimension: " << derived_algebra_dimension(sc) << "\n";
  os << "derived algebra abelian: " << (derived_algebra_is_abelian(sc) ? "yes" : "no") << "\n";
  if (cfg.order >= 0)
    os << "linearizable (order " << cfg.order << "): " << (linearizability_verdict(sc, cfg.order) ? "yes" : "no") << "\n";
  return kOk;
}

int run_probe(const Config& cfg, Output& out) {
  require_format(cfg, {"text", "json"});
  SystemSource src = load_differential(cfg);
  RifForm f = load_and_complete(cfg);
  std::vector<std::size_t> which;
  if (cfg.pivot > 0) {
    if (static_cast<std::size_t>(cfg.pivot) > f.inequations.size())
      throw Error(ErrorCode::Usage, "there are only " + std::to_string(f.inequations.size()) + " inequations");
    which.push_back(static_cast<std::size_t>(cfg.pivot - 1));
  } else {
    for (std::size_t k = 0; k < f.inequations.size(); ++k) which.push_back(k);
  }
  TermOrder order = f.ranking.term_order();
  Json verdicts = Json::array();
  for (std::size_t k : which) {
    PivotVerdict v = probe_pivot_case(src, f.inequations[k], f.ranking, cfg.cap);
    std::string pivot_text = text(f.inequations[k], f.signature, order);
    if (cfg.format == "json") {
      verdicts.push_back({{"index", k + 1}, {"pivot", pivot_text}, {"verdict", to_string(v)}});
    } else {
      out.os() << pivot_text << " = 0: " << to_string(v) << "\n";
    }
  }
  if (cfg.format == "json") out.os() << Json{{"schema", kSchema}, {"probes", verdicts}}.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reduce polynomial PDE systems to solved form and parametric ODE systems"};
  app.require_subcommand(1);
  Config cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("file", cfg.input, "input system (.pde)")->required();
    sub->add_option("--format", cfg.format, "output format: text, json (csv for integrate)");
    sub->add_option("-o,--output", cfg.output, "write to a file instead of standard output");
    sub->add_option("--cap", cfg.cap, "prolongation cap above the input order")->check(CLI::PositiveNumber);
    sub->add_flag("--strict", cfg.strict, "treat the iteration cap as a failure");
  };

  CLI::App* rif_cmd = app.add_subcommand("rif", "print the solved form");
  CLI::App* init_cmd = app.add_subcommand("initdata", "print parametric derivatives and initial data");
  CLI::App* ode_cmd = app.add_subcommand("ode", "print the parametric ODE systems");
  CLI::App* int_cmd = app.add_subcommand("integrate", "integrate along a line in the independent variables");
  CLI::App* poly_cmd = app.add_subcommand("polysolve", "solve a zero-dimensional polynomial system");
  CLI::App* lie_cmd = app.add_subcommand("liestructure", "structure constants of the symmetry algebra");
  CLI::App* probe_cmd = app.add_subcommand("probe", "check the pivot = 0 branches for consistency");
  for (auto* sub : {rif_cmd, init_cmd, ode_cmd, int_cmd, poly_cmd, lie_cmd, probe_cmd}) common(sub);

  int_cmd->set_help_flag("--help", "print this help message and exit");
  int_cmd->add_option("--state", cfg.state, "initial states, e.g. \"u=2,u_x=1,u_y=1\"");
  int_cmd->add_option("--from", cfg.from, "start point, e.g. \"x=0,y=0\" (default origin)");
  int_cmd->add_option("--dir", cfg.dir, "direction, e.g. \"1,0\"");
  int_cmd->add_option("--h", cfg.h, "step size")->check(CLI::PositiveNumber);
  int_cmd->add_option("--steps", cfg.steps, "number of steps")->check(CLI::PositiveNumber);
  int_cmd->add_flag("--no-project", cfg.no_project, "skip projection onto the constraints");
  int_cmd->add_option("--guard", cfg.guard, "smallest admissible pivot magnitude")->check(CLI::PositiveNumber);
  int_cmd->add_option("--trajectory", cfg.trajectory, "trajectory JSON to restart from");
  int_cmd->add_option("--continue-from", cfg.continue_from, "sample index of --trajectory to restart from")
      ->check(CLI::NonNegativeNumber);

  poly_cmd->add_option("--tol", cfg.tol, "residual tolerance");
  poly_cmd->add_option("--seed", cfg.seed, "seed for the random linear combination");

  lie_cmd->add_option("--vf", cfg.vf, "coefficient assignment, e.g. \"xi:x,eta:y\"");
  lie_cmd->add_option("--point", cfg.point, "expansion point, e.g. \"x0=0,y0=2\"");
  lie_cmd->add_option("--basis", cfg.basis, "basis order, e.g. \"eta,xi,eta_y,eta_x,eta_xx\"");
  lie_cmd->add_option("--order", cfg.order, "ODE order for the linearizability verdict")->check(CLI::NonNegativeNumber);

  probe_cmd->add_option("--pivot", cfg.pivot, "1-based inequation index (default: all)")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    Output out(cfg.output);
    if (rif_cmd->parsed()) return run_rif(cfg, out);
    if (init_cmd->parsed()) return run_initdata(cfg, out);
    if (ode_cmd->parsed()) return run_ode(cfg, out);
    if (int_cmd->parsed()) return run_integrate(cfg, out);
    if (poly_cmd->parsed()) return run_polysolve(cfg, out);
    if (lie_cmd->parsed()) return run_liestructure(cfg, out);
    if (probe_cmd->parsed()) return run_probe(cfg, out);
  } catch (const Error& e) {
    std::cerr << "pde2ode: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const CapReached&) {
    std::cerr << "pde2ode: iteration cap reached (--strict)\n";
    return kCapped;
  }
  return kUsage;
}
