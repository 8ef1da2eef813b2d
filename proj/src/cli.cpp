#include "entangle/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "entangle/bell.hpp"
#include "entangle/collective.hpp"
#include "entangle/errors.hpp"
#include "entangle/separability.hpp"
#include "entangle/thresholds.hpp"

namespace entangle::cli {

namespace {

using nlohmann::json;

double parse_double(const std::string& text, const char* what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw InvalidArgument(std::string(what) + ": cannot parse '" + text + "' as a number");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

std::string general(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void require_fraction(double x, const char* flag) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw InvalidArgument(std::string(flag) + ": value must lie in [0, 1]");
  }
}

BipartiteState load_state(const RunConfig& cfg) {
  const int given = static_cast<int>(cfg.input.has_value()) + static_cast<int>(cfg.werner.has_value()) +
                    static_cast<int>(cfg.gisin.has_value()) + static_cast<int>(cfg.polarized.has_value());
  if (given != 1) {
    throw InvalidArgument("exactly one of --werner, --gisin, --polarized, --input is required");
  }
  if (cfg.input) return state_from_file(*cfg.input);
  if (cfg.werner) return werner_state({*cfg.werner});
  if (cfg.gisin) return gisin_state(*cfg.gisin);
  return singlet_plus_polarized(*cfg.polarized);
}

std::string ppt_note(const PptReport& r, std::size_t dim_a, std::size_t dim_b) {
  if (!r.is_ppt) return "negative partial transpose: the state is entangled";
  if (ppt_is_conclusive(dim_a, dim_b)) return "PPT at 2x2 or 2x3 dimensions: the state is separable";
  return "PPT is inconclusive above 2x3 dimensions: entangled PPT states exist";
}

void cmd_ppt(const RunConfig& cfg, std::ostream& out) {
  const BipartiteState s = load_state(cfg);
  const PptReport r = ppt_check(s);
  const std::string verdict = r.is_ppt ? "ppt" : "inseparable";
  const std::string note = ppt_note(r, s.dim_a(), s.dim_b());
  if (cfg.format == Format::Json) {
    json j = state_to_json(s);
    j["ppt"] = {{"eigenvalues", r.eigenvalues},
                {"min_eigenvalue", r.min_eigenvalue},
                {"is_ppt", r.is_ppt},
                {"verdict", verdict},
                {"note", note}};
    out << j.dump(2) << '\n';
    return;
  }
  out << "field,value\n";
  out << "dims," << s.dim_a() << 'x' << s.dim_b() << '\n';
  for (double e : r.eigenvalues) out << "eigenvalue," << general(e) << '\n';
  out << "min_eigenvalue," << general(r.min_eigenvalue) << '\n';
  out << "verdict," << verdict << '\n';
  out << "note," << note << '\n';
}

void cmd_entropy(const RunConfig& cfg, std::ostream& out) {
  const BipartiteState s = load_state(cfg);
  const Alpha2Report r = alpha2_check(s);
  const std::string verdict = r.flags_inseparable ? "inseparable" : "not_flagged";
  if (cfg.format == Format::Json) {
    json j = state_to_json(s);
    j["entropy"] = {{"purity", r.purity},
                    {"purity_a", r.purity_a},
                    {"purity_b", r.purity_b},
                    {"flags_inseparable", r.flags_inseparable},
                    {"verdict", verdict}};
    out << j.dump(2) << '\n';
    return;
  }
  out << "field,value\n";
  out << "purity," << general(r.purity) << '\n';
  out << "purity_a," << general(r.purity_a) << '\n';
  out << "purity_b," << general(r.purity_b) << '\n';
  out << "verdict," << verdict << '\n';
}

void cmd_chsh(const RunConfig& cfg, std::ostream& out) {
  const BipartiteState s = load_state(cfg);
  const CorrelationMatrix c = t_matrix(s);
  const MeasurementSettings best = optimal_settings(s);
  const double attained = chsh_value(s, best);
  const std::string verdict = c.chsh_max > 2.0 ? "violates_chsh" : "satisfies_chsh";
  if (cfg.format == Format::Json) {
    json j = state_to_json(s);
    j["chsh"] = {{"t", c.t},
                 {"m_value", c.m_value},
                 {"chsh_max", c.chsh_max},
                 {"settings", {{"a", best.a}, {"a_prime", best.a_prime}, {"b", best.b},
                               {"b_prime", best.b_prime}}},
                 {"attained", attained},
                 {"verdict", verdict}};
    out << j.dump(2) << '\n';
    return;
  }
  out << "field,value\n";
  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t q = 0; q < 3; ++q)
      out << "t" << p + 1 << q + 1 << ',' << general(c.t[p][q]) << '\n';
  out << "m_value," << general(c.m_value) << '\n';
  out << "chsh_max," << general(c.chsh_max) << '\n';
  auto vec = [](const Vec3& v) { return general(v[0]) + ' ' + general(v[1]) + ' ' + general(v[2]); };
  out << "a," << vec(best.a) << '\n';
  out << "a_prime," << vec(best.a_prime) << '\n';
  out << "b," << vec(best.b) << '\n';
  out << "b_prime," << vec(best.b_prime) << '\n';
  out << "attained," << general(attained) << '\n';
  out << "verdict," << verdict << '\n';
}

OptimizerConfig optimizer_config(const RunConfig& cfg) {
  OptimizerConfig oc;
  oc.restarts = cfg.restarts;
  oc.base_seed = cfg.seed;
  return oc;
}

void cmd_collective(const RunConfig& cfg, std::ostream& out) {
  if (cfg.n_list.size() != 1) throw InvalidArgument("collective: --n takes a single pair count");
  const std::size_t n = cfg.n_list.front();
  const BipartiteState pair = load_state(cfg);

  FilterRows u;
  std::optional<OptimumReport> opt;
  switch (cfg.strategy) {
    case Strategy::Xor: u = xor_rows(n); break;
    case Strategy::ControlledHadamard:
      if (n != 3) throw InvalidArgument("collective: --strategy chad requires --n 3");
      u = controlled_hadamard_rows();
      break;
    case Strategy::Optimize:
      if (!cfg.werner) throw InvalidArgument("collective: --strategy optimize requires --werner");
      opt = optimize(n, *cfg.werner, optimizer_config(cfg));
      u = opt->best_rows;
      break;
  }
  const PostselectionResult r = postselect(pair, n, u, v_from_u(u));
  const CorrelationMatrix c = t_matrix(r.rho_new);

  if (cfg.format == Format::Json) {
    json j = state_to_json(r.rho_new);
    j["collective"] = {{"n", n},
                       {"strategy", to_string(cfg.strategy)},
                       {"success_probability", r.success_probability},
                       {"m_value", c.m_value},
                       {"chsh_max", c.chsh_max},
                       {"u0", u.u0},
                       {"u1", u.u1}};
    if (opt) {
      json maxima = json::array();
      for (const auto& [m, count] : opt->distinct_local_maxima) maxima.push_back({m, count});
      j["collective"]["restarts_converged"] = opt->restarts_converged;
      j["collective"]["distinct_local_maxima"] = std::move(maxima);
    }
    out << j.dump(2) << '\n';
    return;
  }
  auto row = [](const RealVector& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + general(v[i]);
    return s;
  };
  out << "field,value\n";
  out << "n," << n << '\n';
  out << "strategy," << to_string(cfg.strategy) << '\n';
  out << "success_probability," << general(r.success_probability) << '\n';
  out << "m_value," << general(c.m_value) << '\n';
  out << "chsh_max," << general(c.chsh_max) << '\n';
  out << "u0," << row(u.u0) << '\n';
  out << "u1," << row(u.u1) << '\n';
  if (opt) {
    out << "restarts_converged," << opt->restarts_converged << '\n';
    for (const auto& [m, count] : opt->distinct_local_maxima) {
      out << "local_maximum," << general(m) << " x" << count << '\n';
    }
  }
}

void cmd_scan(const RunConfig& cfg, std::ostream& out) {
  const auto records = scan(cfg.n_list, cfg.x_grid, optimizer_config(cfg), cfg.strategy);
  if (cfg.format == Format::Json) {
    json j = json::array();
    for (const auto& r : records) {
      j.push_back({{"n", r.n},
                   {"x", r.x},
                   {"strategy", r.strategy},
                   {"chsh_max", r.chsh_max},
                   {"success_probability", r.success_probability}});
    }
    out << j.dump(2) << '\n';
    return;
  }
  out << "n,x,strategy,chsh_max,success_probability\n";
  for (const auto& r : records) {
    out << r.n << ',' << format_number(r.x) << ',' << r.strategy << ',' << format_number(r.chsh_max)
        << ',' << format_number(r.success_probability) << '\n';
  }
}

struct ExampleRow {
  std::string claim;
  std::string expected;
  std::string computed;
  std::string status;
};

std::string optional_value(const std::optional<double>& v) { return v ? general(*v) : "none"; }

std::vector<ExampleRow> example_rows() {
  std::vector<ExampleRow> rows;
  auto check = [](bool ok) { return std::string(ok ? "PASS" : "FAIL"); };
  constexpr double tol = 1e-6;

  const StateFamily werner = [](double x) { return werner_state({x}); };
  const auto ppt = ppt_threshold(werner);
  const auto alpha2 = alpha2_threshold(werner);
  const auto bell = chsh_threshold(werner);
  rows.push_back({"werner ppt threshold", general(1.0 / 3.0), optional_value(ppt),
                  check(ppt && std::abs(*ppt - 1.0 / 3.0) < tol)});
  rows.push_back({"werner alpha2 threshold", general(1.0 / std::sqrt(3.0)), optional_value(alpha2),
                  check(alpha2 && std::abs(*alpha2 - 1.0 / std::sqrt(3.0)) < tol)});
  rows.push_back({"werner chsh threshold", general(1.0 / std::sqrt(2.0)), optional_value(bell),
                  check(bell && std::abs(*bell - 1.0 / std::sqrt(2.0)) < tol)});

  {
    const auto s = werner_state({0.2});
    const bool none = ppt_check(s).is_ppt && !alpha2_check(s).flags_inseparable &&
                      t_matrix(s).chsh_max <= 2.0;
    rows.push_back({"werner x=0.2 flagged by no criterion", "separable", none ? "separable" : "flagged",
                    check(none)});
  }

  for (int k = 1; k <= 5; ++k) {
    const double g = 0.1 * k;
    const StateFamily gisin = [g](double x) { return gisin_state(gisin_with_product(x, g)); };
    const auto gp = ppt_threshold(gisin);
    const double expected_ppt = 1.0 / (1.0 + 2.0 * g);
    const std::string tag = "gisin |ab|=" + general(g);
    rows.push_back({tag + " ppt threshold", general(expected_ppt), optional_value(gp),
                    check(gp && std::abs(*gp - expected_ppt) < tol)});

    const auto gb = chsh_threshold(gisin);
    const double quoted_bell = 1.0 / (1.0 + 2.0 * g * (std::sqrt(2.0) - 1.0));
    const bool matches = gb && std::abs(*gb - quoted_bell) < tol;
    rows.push_back({tag + " chsh threshold", general(quoted_bell), optional_value(gb),
                    matches ? "PASS" : "NOTE"});
    const bool ordered = gp && (!gb || *gp < *gb);
    rows.push_back({tag + " ppt below chsh threshold", "true", ordered ? "true" : "false",
                    check(ordered)});
  }

  for (double x : {0.001, 0.01, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0}) {
    const double lowest = ppt_check(singlet_plus_polarized(x)).min_eigenvalue;
    rows.push_back({"singlet+polarized x=" + general(x) + " min sigma eigenvalue", "< 0",
                    general(lowest), check(lowest < -1e-12)});
  }
  {
    const StateFamily polarized = [](double x) { return singlet_plus_polarized(x); };
    const auto pb = chsh_threshold(polarized);
    rows.push_back({"singlet+polarized chsh threshold", "0.8", optional_value(pb),
                    pb && std::abs(*pb - 0.8) < tol ? "PASS" : "NOTE"});
  }
  return rows;
}

void cmd_examples(const RunConfig& cfg, std::ostream& out) {
  const auto rows = example_rows();
  if (cfg.format == Format::Json) {
    json j = json::array();
    for (const auto& r : rows) {
      j.push_back({{"claim", r.claim}, {"expected", r.expected}, {"computed", r.computed}, {"status", r.status}});
    }
    out << j.dump(2) << '\n';
    return;
  }
  out << "claim,expected,computed,status\n";
  for (const auto& r : rows) out << r.claim << ',' << r.expected << ',' << r.computed << ',' << r.status << '\n';
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10f", v);
  return buf;
}

std::vector<double> parse_grid(const std::string& text) {
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw InvalidArgument("--x: expected min:max:steps");
    const double lo = parse_double(parts[0], "--x");
    const double hi = parse_double(parts[1], "--x");
    const double steps_d = parse_double(parts[2], "--x");
    if (steps_d < 0 || steps_d != std::floor(steps_d)) {
      throw InvalidArgument("--x: steps must be a non-negative integer");
    }
    if (lo > hi) throw InvalidArgument("--x: min exceeds max");
    const auto steps = static_cast<std::size_t>(steps_d);
    std::vector<double> grid;
    for (std::size_t i = 0; i < steps; ++i) {
      grid.push_back(steps == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1));
    }
    for (double x : grid) require_fraction(x, "--x");
    return grid;
  }
  std::vector<double> grid;
  if (text.empty()) return grid;
  for (const auto& part : split(text, ',')) {
    grid.push_back(parse_double(part, "--x"));
    require_fraction(grid.back(), "--x");
  }
  return grid;
}

std::vector<std::size_t> parse_n_list(const std::string& text) {
  std::vector<std::size_t> list;
  if (text.empty()) return list;
  for (const auto& part : split(text, ',')) {
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), n);
    if (ec != std::errc() || ptr != part.data() + part.size() || n < 1 || n > 5) {
      throw InvalidArgument("--n: '" + part + "' is not a pair count in [1, 5]");
    }
    list.push_back(n);
  }
  return list;
}

GisinParams parse_gisin(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw InvalidArgument("--gisin: expected X,A,B");
  GisinParams p{parse_double(parts[0], "--gisin"), parse_double(parts[1], "--gisin"),
                parse_double(parts[2], "--gisin")};
  require_fraction(p.x, "--gisin");
  if (std::abs(std::norm(p.a) + std::norm(p.b) - 1.0) > 1e-12) {
    throw InvalidArgument("--gisin: A^2 + B^2 must equal 1 to 12 digits");
  }
  return p;
}

RunConfig parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Entanglement criteria and collective Bell tests on Werner pairs", "entangle"};
  app.require_subcommand(1);

  std::string werner, gisin, polarized, input, n_text, x_text, strategy, out, format = "csv";
  std::size_t restarts = 64;
  std::uint64_t seed = 0;

  const std::vector<std::pair<const char*, Command>> commands = {
      {"ppt", Command::Ppt},           {"entropy", Command::Entropy},
      {"chsh", Command::Chsh},         {"collective", Command::Collective},
      {"scan", Command::Scan},         {"examples", Command::Examples}};
  const std::vector<std::pair<const char*, const char*>> help = {
      {"ppt", "Partial-transpose spectrum and verdict"},
      {"entropy", "Purity (alpha = 2 entropy) criterion"},
      {"chsh", "Correlation tensor, CHSH maximum and optimal settings"},
      {"collective", "Postselected collective test on n pairs"},
      {"scan", "CHSH maximum over (n, x) as CSV"},
      {"examples", "Reproduce the reference thresholds and examples"}};

  for (std::size_t i = 0; i < commands.size(); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i].first, help[i].second);
    sub->add_option("--werner", werner, "Werner state with singlet fraction X");
    sub->add_option("--gisin", gisin, "Mixture X of a|01>+b|10> with |00>, |11>: X,A,B");
    sub->add_option("--polarized", polarized, "Singlet fraction X mixed with |00>");
    sub->add_option("--input", input, "State file (JSON interchange format)");
    sub->add_option("--n", n_text, "Pair counts, comma separated");
    sub->add_option("--x", x_text, "Singlet fractions: min:max:steps or a comma list");
    sub->add_option("--strategy", strategy, "xor | chad | optimize");
    sub->add_option("--restarts", restarts, "Random restarts for optimize");
    sub->add_option("--seed", seed, "Base seed for optimize");
    sub->add_option("--out", out, "Output path (default: standard output)");
    sub->add_option("--format", format, "csv | json");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw InvalidArgument(app.help());
  } catch (const CLI::ParseError& e) {
    throw InvalidArgument(e.what());
  }

  RunConfig cfg;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    if (app.got_subcommand(commands[i].first)) cfg.command = commands[i].second;
  }
  const CLI::App* sub = app.get_subcommands().front();
  auto given = [&](const char* flag) { return sub->count(flag) > 0; };

  if (given("--werner")) {
    cfg.werner = parse_double(werner, "--werner");
    require_fraction(*cfg.werner, "--werner");
  }
  if (given("--gisin")) cfg.gisin = parse_gisin(gisin);
  if (given("--polarized")) {
    cfg.polarized = parse_double(polarized, "--polarized");
    require_fraction(*cfg.polarized, "--polarized");
  }
  if (given("--input")) cfg.input = input;
  if (given("--n")) cfg.n_list = parse_n_list(n_text);
  if (given("--x")) cfg.x_grid = parse_grid(x_text);
  if (given("--out")) cfg.out = out;

  cfg.strategy = cfg.command == Command::Scan ? Strategy::Optimize : Strategy::Xor;
  if (given("--strategy")) {
    if (strategy == "xor") {
      cfg.strategy = Strategy::Xor;
    } else if (strategy == "chad") {
      cfg.strategy = Strategy::ControlledHadamard;
    } else if (strategy == "optimize") {
      cfg.strategy = Strategy::Optimize;
    } else {
      throw InvalidArgument("--strategy: expected xor, chad or optimize");
    }
  }
  if (restarts < 1) throw InvalidArgument("--restarts: must be at least 1");
  cfg.restarts = restarts;
  cfg.seed = seed;
  if (format == "csv") {
    cfg.format = Format::Csv;
  } else if (format == "json") {
    cfg.format = Format::Json;
  } else {
    throw InvalidArgument("--format: expected csv or json");
  }

  if (cfg.command == Command::Scan && (!given("--n") || !given("--x"))) {
    throw InvalidArgument("scan: --n and --x are required");
  }
  if (cfg.command == Command::Collective && !given("--n")) {
    throw InvalidArgument("collective: --n is required");
  }
  return cfg;
}

void execute(const RunConfig& cfg, std::ostream& out) {
  switch (cfg.command) {
    case Command::Ppt: cmd_ppt(cfg, out); break;
    case Command::Entropy: cmd_entropy(cfg, out); break;
    case Command::Chsh: cmd_chsh(cfg, out); break;
    case Command::Collective: cmd_collective(cfg, out); break;
    case Command::Scan: cmd_scan(cfg, out); break;
    case Command::Examples: cmd_examples(cfg, out); break;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig cfg = parse_args(args);
    std::ostringstream buffer;
    execute(cfg, buffer);
    if (cfg.out) {
      std::ofstream file(*cfg.out);
      if (!file) throw InputError("cannot write " + *cfg.out);
      file << buffer.str();
    } else {
      out << buffer.str();
    }
    return kExitOk;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace entangle::cli
