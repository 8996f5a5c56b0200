// ubp: two-dimensional bootstrap percolation toolkit.
//
// Every command reads an update family (--family takes a JSON file path or a
// bundled name), writes a human-readable summary to stdout or machine JSON
// with --json, and reports errors on stderr. Exit codes: 0 success, 1 bad
// input, 2 precondition violation, 3 budget exhausted.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ubp/ubp.hpp"

namespace {

using ubp::json;

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ubp::ParseError(ubp::ParseCode::MalformedJson,
                          "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct FamilyArg {
  std::string spec;
  std::string name;  // basename or builtin name, for reports
  ubp::UpdateFamily fam;

  void resolve() {
    std::ifstream probe(spec);
    if (probe.good()) {
      probe.close();
      fam = ubp::parse_family(slurp(spec));
      name = spec;
      const auto slash = name.find_last_of('/');
      if (slash != std::string::npos) name = name.substr(slash + 1);
      const auto dot = name.rfind(".json");
      if (dot != std::string::npos) name = name.substr(0, dot);
      return;
    }
    if (ubp::named_family(spec, fam)) {
      name = spec;
      return;
    }
    throw ubp::ParseError(ubp::ParseCode::MalformedJson,
                          "no such family file or builtin name: " + spec);
  }
};

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out)
    throw ubp::ParseError(ubp::ParseCode::MalformedJson,
                          "cannot write " + out_path);
  out << text;
}

std::string dir_str(const ubp::Dir& d) {
  return "(" + std::to_string(d.x) + "," + std::to_string(d.y) + ")";
}

std::string arc_str(const ubp::Arc& a) {
  std::string s = a.closed_start ? "[" : "(";
  s += dir_str(a.start) + " .. " + dir_str(a.end);
  s += a.closed_end ? "]" : ")";
  return s;
}

std::string arcset_str(const ubp::ArcSet& s) {
  if (s.is_full()) return "full circle";
  if (s.is_empty()) return "empty";
  std::string out;
  for (const ubp::Arc& a : s.arcs()) {
    if (!out.empty()) out += " ";
    out += arc_str(a);
  }
  return out;
}

ubp::Dir parse_dir(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos)
    throw ubp::ParseError(ubp::ParseCode::BadShape,
                          "direction must be x,y");
  try {
    const ubp::i64 x = std::stoll(s.substr(0, comma));
    const ubp::i64 y = std::stoll(s.substr(comma + 1));
    if (x == 0 && y == 0)
      throw ubp::ParseError(ubp::ParseCode::BadShape,
                            "direction must be nonzero");
    return ubp::dir_from(x, y);
  } catch (const std::invalid_argument&) {
    throw ubp::ParseError(ubp::ParseCode::BadShape, "direction must be x,y");
  } catch (const std::out_of_range&) {
    throw ubp::ParseError(ubp::ParseCode::BadShape, "direction out of range");
  }
}

std::vector<double> parse_grid(const std::string& s) {
  double lo = 0, hi = 0;
  long long steps = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(s);
  if (!(in >> lo >> c1 >> hi >> c2 >> steps) || c1 != ':' || c2 != ':' ||
      steps < 1)
    throw ubp::ParseError(ubp::ParseCode::BadShape,
                          "--p-grid expects lo:hi:steps with steps >= 1");
  std::vector<double> grid;
  if (steps == 1) {
    grid.push_back(lo);
    return grid;
  }
  for (long long i = 0; i < steps; ++i)
    grid.push_back(lo + (hi - lo) * static_cast<double>(i) /
                            static_cast<double>(steps - 1));
  return grid;
}

std::vector<ubp::Site> parse_sites(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ubp::ParseError(ubp::ParseCode::MalformedJson, e.what());
  }
  const json& arr = j.is_object() && j.contains("sites") ? j["sites"] : j;
  if (!arr.is_array())
    throw ubp::ParseError(ubp::ParseCode::BadShape,
                          "expected a JSON array of [x,y] sites");
  std::vector<ubp::Site> sites;
  for (const json& js : arr) sites.push_back(ubp::site_from_json(js));
  return sites;
}

ubp::Arc require_witness(const ubp::Classification& c, ubp::Kind want,
                         const char* what) {
  if (c.kind != want || !c.witness)
    throw ubp::PreconditionError(std::string(what) + " requires a " +
                                 ubp::kind_name(want) + " family, got " +
                                 ubp::kind_name(c.kind));
  return *c.witness;
}

int run(int argc, char** argv) {
  CLI::App app{"two-dimensional bootstrap percolation toolkit"};
  app.require_subcommand(1);

  FamilyArg fam;
  bool as_json = false;
  std::string out_path;
  int n = 64;
  double p = 0.1;
  std::string p_grid_spec;
  long long trials = 400;
  std::uint64_t seed = 1;
  int workers = 1;
  long long max_steps = -1;
  std::size_t cap = 1000;
  ubp::i64 window_w = 0, window_h = 0;
  std::size_t lmax = 20;
  std::string dir_spec = "0,1";
  ubp::i64 z_len = 1;
  std::string sites_path = "-";
  std::string state_path;
  int m_max = 10;
  ubp::i64 mu = 0;
  double p_lo = 1e-6, p_hi = 0.5;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--family", fam.spec, "family JSON file or builtin name")
        ->required();
    cmd->add_flag("--json", as_json, "machine-readable JSON output");
    cmd->add_option("--out", out_path, "write output to a file");
  };

  CLI::App* c_classify = app.add_subcommand("classify", "classify the family");
  add_common(c_classify);

  CLI::App* c_stable = app.add_subcommand("stable-set", "stable directions");
  add_common(c_stable);

  CLI::App* c_quasi =
      app.add_subcommand("quasi", "quasi-stable directions and their check");
  add_common(c_quasi);

  CLI::App* c_alpha = app.add_subcommand("alpha", "block size constants");
  add_common(c_alpha);
  c_alpha->add_option("--lmax", lmax, "largest block length searched");

  CLI::App* c_ublock = app.add_subcommand("ublock", "u-block verdict");
  add_common(c_ublock);
  c_ublock->add_option("--dir", dir_spec, "direction as x,y")->required();
  c_ublock->add_option("--z", z_len, "seed segment length");
  c_ublock->add_option("--window-w", window_w, "simulation window width");
  c_ublock->add_option("--window-h", window_h, "simulation window height");

  CLI::App* c_cover = app.add_subcommand("cover", "covering algorithm");
  add_common(c_cover);
  c_cover->add_option("--sites", sites_path,
                      "JSON site list ('-' reads stdin)");
  c_cover->add_option("--seed", seed, "merge-order seed (0 = canonical)");

  CLI::App* c_growth =
      app.add_subcommand("growth-verify", "droplet growth verification");
  add_common(c_growth);
  c_growth->add_option("--mmax", m_max, "largest droplet index verified");
  c_growth->add_option("--mu", mu, "strip width (0 = minimum feasible)");
  c_growth->add_option("--lmax", lmax, "largest block length searched");

  CLI::App* c_witness =
      app.add_subcommand("witness", "finite seed with unbounded closure");
  add_common(c_witness);
  c_witness->add_option("--cap", cap, "sparse-closure certificate cap");

  CLI::App* c_sim = app.add_subcommand("simulate", "run the lattice dynamics");
  add_common(c_sim);
  c_sim->add_option("--n", n, "torus side length");
  c_sim->add_option("--p", p, "initial infection density");
  c_sim->add_option("--seed", seed, "sampling seed");
  c_sim->add_option("--max-steps", max_steps, "step budget (default 2n^2)");
  c_sim->add_option("--state", state_path, "initial state snapshot (JSON)");

  CLI::App* c_pc = app.add_subcommand("pc", "critical probability bisection");
  add_common(c_pc);
  c_pc->add_option("--n", n, "torus side length");
  c_pc->add_option("--trials", trials, "trials per probe point");
  c_pc->add_option("--seed", seed, "master seed");
  c_pc->add_option("--workers", workers, "worker threads");
  c_pc->add_option("--p-lo", p_lo, "lower bisection bound");
  c_pc->add_option("--p-hi", p_hi, "upper bisection bound");

  CLI::App* c_tau = app.add_subcommand("tau", "infection time scaling");
  add_common(c_tau);
  c_tau->add_option("--n", n, "torus side length");
  c_tau->add_option("--p", p, "single density point");
  c_tau->add_option("--p-grid", p_grid_spec, "density grid lo:hi:steps");
  c_tau->add_option("--trials", trials, "trials per density");
  c_tau->add_option("--seed", seed, "master seed");
  c_tau->add_option("--workers", workers, "worker threads");
  c_tau->add_option("--max-steps", max_steps, "step budget per trial");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  fam.resolve();

  if (c_classify->parsed()) {
    const ubp::Classification c = ubp::classify(fam.fam);
    if (as_json) {
      emit(ubp::classification_json(c).dump(2) + "\n", out_path);
    } else {
      std::string s = std::string(ubp::kind_name(c.kind));
      if (c.witness) s += "  witness " + arc_str(*c.witness);
      emit(s + "\n", out_path);
    }
    return 0;
  }

  if (c_stable->parsed()) {
    const ubp::ArcSet s = ubp::stable_set(fam.fam);
    if (as_json)
      emit(ubp::arcset_json(s).dump(2) + "\n", out_path);
    else
      emit(arcset_str(s) + "\n", out_path);
    return 0;
  }

  if (c_quasi->parsed()) {
    const std::vector<ubp::Dir> q = ubp::quasi_stable_set(fam.fam);
    const std::vector<ubp::Dir> reps = ubp::representative_directions(fam.fam);
    const ubp::QuasiStabilityResult chk =
        ubp::verify_quasi_stability(fam.fam, reps);
    if (as_json) {
      json j;
      json jq = json::array();
      for (const ubp::Dir& d : q) jq.push_back(ubp::dir_json(d));
      json jr = json::array();
      for (const ubp::Dir& d : reps) jr.push_back(ubp::dir_json(d));
      j["quasi_stable"] = std::move(jq);
      j["representatives"] = std::move(jr);
      j["consecutive_check"] = chk.ok;
      if (chk.first_failing)
        j["first_failing"] = json::array({ubp::dir_json(chk.first_failing->first),
                                          ubp::dir_json(chk.first_failing->second)});
      emit(j.dump(2) + "\n", out_path);
    } else {
      std::string s = "quasi-stable:";
      for (const ubp::Dir& d : q) s += " " + dir_str(d);
      s += "\nconsecutive check: ";
      s += chk.ok ? "ok" : ("fails at " + dir_str(chk.first_failing->first) +
                            " " + dir_str(chk.first_failing->second));
      emit(s + "\n", out_path);
    }
    return 0;
  }

  if (c_alpha->parsed()) {
    const std::optional<std::size_t> a1 = ubp::alpha1(fam.fam);
    ubp::Alpha2Report a2;
    const ubp::Classification c = ubp::classify(fam.fam);
    if (c.kind == ubp::Kind::Critical)
      a2 = ubp::alpha2(fam.fam, *c.witness, lmax);
    if (as_json) {
      emit(ubp::alpha_report_json(a1, a2).dump(2) + "\n", out_path);
    } else {
      std::string s = "alpha1 = ";
      s += a1 ? std::to_string(*a1) : "none";
      s += "\nalpha2 = ";
      s += a2.value ? std::to_string(*a2.value) : "none";
      for (const auto& [u, len] : a2.per_direction)
        s += "\n  " + dir_str(u) + ": " +
             (len ? std::to_string(*len) : "not found");
      emit(s + "\n", out_path);
    }
    return 0;
  }

  if (c_ublock->parsed()) {
    const ubp::Dir u = parse_dir(dir_spec);
    const ubp::UBlockVerdict v =
        (window_w > 0 && window_h > 0)
            ? ubp::is_u_block(fam.fam, u, z_len, window_w, window_h)
            : ubp::is_u_block(fam.fam, u, z_len);
    if (as_json) {
      emit(ubp::ublock_json(v).dump(2) + "\n", out_path);
    } else {
      std::string s = ubp::ublock_status_name(v.status);
      if (v.certificate) s += "  shift " + std::to_string(*v.certificate);
      emit(s + "\n", out_path);
    }
    return 0;
  }

  if (c_cover->parsed()) {
    const std::vector<ubp::Site> sites = parse_sites(slurp(sites_path));
    const ubp::CoverResult r = ubp::cover(sites, fam.fam, seed);
    if (as_json) {
      emit(ubp::cover_json(r).dump(2) + "\n", out_path);
    } else {
      std::string s = "blocks selected: " + std::to_string(r.selected.size());
      s += "\ndroplets: " + std::to_string(r.droplets.size());
      s += "\nmerges: " + std::to_string(r.merge_trace.size());
      emit(s + "\n", out_path);
    }
    return 0;
  }

  if (c_growth->parsed()) {
    const ubp::Classification c = ubp::classify(fam.fam);
    const ubp::Arc w = require_witness(c, ubp::Kind::Critical, "growth-verify");
    const ubp::i64 use_mu =
        mu > 0 ? mu : ubp::min_feasible_mu(fam.fam, w, lmax);
    const ubp::GrowthReport rep =
        ubp::verify_droplet_growth(fam.fam, w, m_max, use_mu, lmax);
    if (as_json) {
      emit(ubp::growth_json(rep).dump(2) + "\n", out_path);
    } else {
      std::string s = "mu " + std::to_string(rep.mu) + " (minimum " +
                      std::to_string(rep.min_mu) + "), frame " +
                      dir_str(rep.u_r) + " " + dir_str(rep.u_plus);
      for (const ubp::GrowthStep& st : rep.steps)
        s += "\n  m=" + std::to_string(st.m) +
             (st.passed ? " pass" : " FAIL") + " lines " +
             std::to_string(st.new_lines) + " blocks " +
             std::to_string(st.blocks_placed);
      s += rep.all_passed ? "\nall passed" : "\nFAILED";
      emit(s + "\n", out_path);
    }
    return rep.all_passed ? 0 : 2;
  }

  if (c_witness->parsed()) {
    const ubp::Classification c = ubp::classify(fam.fam);
    const ubp::Arc w = require_witness(c, ubp::Kind::Supercritical, "witness");
    const ubp::SupercriticalWitness sw =
        ubp::supercritical_witness(fam.fam, w, cap);
    if (as_json) {
      emit(ubp::witness_json(sw).dump(2) + "\n", out_path);
    } else {
      std::string s = "seed sites: " + std::to_string(sw.seed.size());
      s += "\nclosure exceeds " + std::to_string(sw.cap) + ": ";
      s += sw.exceeded_at_cap ? "yes" : "no";
      s += "\nclosure exceeds " + std::to_string(2 * sw.cap) + ": ";
      s += sw.exceeded_at_double ? "yes" : "no";
      emit(s + "\n", out_path);
    }
    return 0;
  }

  if (c_sim->parsed()) {
    ubp::Lattice l0 = state_path.empty()
                          ? ubp::sample_initial(n, p, seed, 0)
                          : ubp::lattice_from_json(json::parse(slurp(state_path)));
    const ubp::CompiledFamily cf = ubp::CompiledFamily::compile(fam.fam);
    const long long budget =
        max_steps >= 0 ? max_steps
                       : 2LL * l0.width() * static_cast<long long>(l0.height());
    const ubp::FixpointResult r = ubp::run_to_fixpoint(std::move(l0), cf, budget);
    if (as_json) {
      json j = ubp::lattice_json(r.lattice);
      j["steps_taken"] = r.steps_taken;
      j["reached_fixpoint"] = r.reached_fixpoint;
      j["infected"] = r.lattice.grid.popcount();
      j["full"] = r.lattice.grid.all_set();
      emit(j.dump(2) + "\n", out_path);
    } else if (!out_path.empty()) {
      emit(ubp::to_pbm(r.lattice), out_path);
      std::cout << "steps " << r.steps_taken << ", infected "
                << r.lattice.grid.popcount() << ", wrote " << out_path << "\n";
    } else {
      std::string s = "steps " + std::to_string(r.steps_taken);
      s += r.reached_fixpoint ? " (fixpoint)" : " (budget)";
      s += "\ninfected " + std::to_string(r.lattice.grid.popcount()) + " of " +
           std::to_string(static_cast<long long>(r.lattice.width()) *
                          r.lattice.height());
      emit(s + "\n", out_path);
    }
    return 0;
  }

  if (c_pc->parsed()) {
    ubp::ExperimentConfig cfg;
    cfg.family_name = fam.name;
    cfg.n = n;
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.workers = workers;
    cfg.p_lo = p_lo;
    cfg.p_hi = p_hi;
    const ubp::PcResult r = ubp::estimate_pc(fam.fam, cfg);
    if (as_json) {
      json j;
      j["p_lo"] = r.lo;
      j["p_hi"] = r.hi;
      j["midpoint"] = 0.5 * (r.lo + r.hi);
      j["probes"] = r.trace.size();
      emit(j.dump(2) + "\n", out_path);
    } else {
      std::ostringstream ss;
      ss << "p_c in [" << r.lo << ", " << r.hi << "] after "
         << r.trace.size() << " probes\n";
      std::vector<ubp::EstimateRow> rows{r.probe_lo, r.probe_hi};
      rows.insert(rows.end(), r.trace.begin(), r.trace.end());
      ubp::write_csv(ss, rows);
      emit(ss.str(), out_path);
    }
    return 0;
  }

  if (c_tau->parsed()) {
    ubp::ExperimentConfig cfg;
    cfg.family_name = fam.name;
    cfg.n = n;
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.workers = workers;
    cfg.max_steps = max_steps;
    cfg.p_grid = p_grid_spec.empty() ? std::vector<double>{p}
                                     : parse_grid(p_grid_spec);
    const ubp::TauScalingResult r = ubp::tau_scaling(fam.fam, cfg);
    bool aborted = false;
    for (const ubp::TauRow& row : r.rows) aborted = aborted || row.aborted;
    if (as_json) {
      json j;
      json rows = json::array();
      for (const ubp::TauRow& row : r.rows)
        rows.push_back(json{{"p", row.p},
                            {"trials", row.trials},
                            {"measured", row.measured},
                            {"discarded", row.discarded},
                            {"exhausted", row.exhausted},
                            {"tau_median", row.tau_median},
                            {"tau_mean", row.tau_mean},
                            {"aborted", row.aborted}});
      j["rows"] = std::move(rows);
      j["slope_log_tau_vs_log_inv_p"] = r.slope_super;
      j["se_log_tau_vs_log_inv_p"] = r.se_super;
      j["slope_loglog_tau_vs_log_inv_p"] = r.slope_crit;
      j["se_loglog_tau_vs_log_inv_p"] = r.se_crit;
      emit(j.dump(2) + "\n", out_path);
    } else {
      std::ostringstream ss;
      ubp::write_csv(ss, ubp::tau_rows_to_estimates(cfg, r));
      ss << "# slope log(tau) vs log(1/p): " << r.slope_super << " +- "
         << r.se_super << "\n";
      ss << "# slope loglog(tau) vs log(1/p): " << r.slope_crit << " +- "
         << r.se_crit << "\n";
      emit(ss.str(), out_path);
    }
    if (aborted) {
      std::cerr << "tau: budget exhaustion above 20% at some density\n";
      return 3;
    }
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ubp::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ubp::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ubp::BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
