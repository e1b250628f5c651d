// entlab command-line front end.
//
// Exit codes: 0 success (decisions that come out false are data), 2 parse or
// validation errors, 3 numerical failure or unwritable output.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "entlab/embezzle.hpp"
#include "entlab/error.hpp"
#include "entlab/io.hpp"
#include "entlab/locc.hpp"
#include "entlab/quantum.hpp"
#include "entlab/spectra.hpp"

using namespace entlab;
using io::json;

namespace {

struct Config {
  std::uint64_t seed = 0;
  double tol = 1e-9;
  std::string out;
  std::string format = "csv";
};

Config cfg;

io::Format table_format() { return cfg.format == "csv" ? io::Format::csv : io::Format::json; }

void emit(const json& j) { io::write_text(cfg.out, io::dump(j, 2) + "\n"); }

std::vector<double> split_numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorKind::invalid_input, "not a number: \"" + item + "\"");
    }
  }
  return out;
}

// State argument: a JSON file, or one of bell, max:N, product:DA,DB, schmidt:c1,c2,...
PureBipartiteState load_state(const std::string& arg) {
  if (arg == "bell") return PureBipartiteState::maximally_entangled(2);
  if (arg.rfind("max:", 0) == 0) {
    return PureBipartiteState::maximally_entangled(static_cast<int>(split_numbers(arg.substr(4)).at(0)));
  }
  if (arg.rfind("product:", 0) == 0) {
    const auto d = split_numbers(arg.substr(8));
    if (d.size() != 2) fail(ErrorKind::invalid_input, "product:DA,DB expects two dims");
    return PureBipartiteState::product(static_cast<int>(d[0]), static_cast<int>(d[1]));
  }
  if (arg.rfind("schmidt:", 0) == 0) {
    const auto c = split_numbers(arg.substr(8));
    return PureBipartiteState::from_schmidt(c);
  }
  return io::pure_from_json(io::read_file(arg));
}

DensityMatrix load_density(const std::string& arg) {
  if (arg.find(':') != std::string::npos || arg == "bell") {
    return marginal(load_state(arg), Party::A);
  }
  return io::density_from_json(io::read_file(arg));
}

std::size_t thread_count(std::size_t jobs) {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ENTLAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n = static_cast<std::size_t>(v);
  }
  return std::max<std::size_t>(1, std::min(n, jobs));
}

// Runs f(i) for i < jobs on up to ENTLAB_THREADS threads; results keep index
// order and the first failing index rethrows.
template <class T>
std::vector<T> parallel_map(std::size_t jobs, const std::function<T(std::size_t)>& f) {
  std::vector<T> out(jobs);
  std::vector<std::exception_ptr> errors(jobs);
  const std::size_t workers = thread_count(jobs);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < jobs; i += workers) {
        try {
          out[i] = f(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

json leaves_json(const std::vector<Leaf>& leaves) {
  json arr = json::array();
  for (const Leaf& l : leaves) {
    json rec = {{"history", join_history(l.history)},
                {"probability", l.probability},
                {"dims", {l.dim_A, l.dim_B}}};
    if (l.probability > 0.0) {
      const PureBipartiteState s = PureBipartiteState::normalized(l.dim_A, l.dim_B, l.state);
      rec["schmidt_coefficients"] = schmidt(s).coefficients;
      rec["state"] = io::to_json(s);
    }
    arr.push_back(std::move(rec));
  }
  return {{"leaves", std::move(arr)}};
}

json entropies_json(const Entropies& e) {
  json renyi = json::object();
  for (const auto& [alpha, h] : e.H_alpha) {
    char key[32];
    std::snprintf(key, sizeof key, "%.17g", alpha);
    renyi[key] = h;
  }
  return {{"H", e.H}, {"H_alpha", std::move(renyi)}, {"schmidt_rank", e.schmidt_rank}};
}

MonotoneFunction parse_monotone(const std::string& spec) {
  if (spec == "xlogx") return MonotoneFunction::xlogx();
  if (spec == "support") return MonotoneFunction::support_indicator();
  if (spec.rfind("power:", 0) == 0) return MonotoneFunction::power(split_numbers(spec.substr(6)).at(0));
  if (spec.rfind("hinge:", 0) == 0) return MonotoneFunction::hinge(split_numbers(spec.substr(6)).at(0));
  fail(ErrorKind::invalid_input, "unknown monotone \"" + spec + "\" (xlogx, support, power:a, hinge:c)");
}

std::vector<double> t_grid(double t_min, double t_max, int steps) {
  if (steps < 1) fail(ErrorKind::invalid_input, "--steps must be >= 1");
  if (!(t_max >= t_min)) fail(ErrorKind::invalid_input, "--t-max must be >= --t-min");
  std::vector<double> grid;
  for (int k = 0; k <= steps; ++k) grid.push_back(t_min + (t_max - t_min) * k / steps);
  if (steps == 1 && t_min == t_max) grid.resize(1);
  return grid;
}

int exit_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::numerical_failure:
    case ErrorKind::io_failure:
      return 3;
    default:
      return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entlab: finite-dimensional bipartite entanglement workbench"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  app.add_option("--seed", cfg.seed, "RNG seed");
  app.add_option("--tol", cfg.tol, "Tolerance in (0, 1e-3]")
      ->check(CLI::Range(std::nextafter(0.0, 1.0), 1e-3));
  app.add_option("--out", cfg.out, "Output path (default stdout)");
  app.add_option("--format", cfg.format, "Table format")->check(CLI::IsMember({"csv", "json"}));

  std::function<void()> action;
  const auto on = [&](CLI::App* sub, std::function<void()> f) {
    sub->callback([&action, f = std::move(f)] { action = f; });
  };

  std::string a1, a2, a3;
  std::vector<double> alphas, values, values2;
  double lambda = 0.5, t = 0.0, t_min = 0.0, t_max = 1.0, period = 0.0;
  int m = 1, steps = 10, iters = 20, d = 2, dA = 2, dB = 2;
  std::vector<std::size_t> n_list, m_list;
  std::size_t n = 2;
  std::string target = "bell", start, family = "lambda", party = "A", fspec = "xlogx";

  // ---- states and distances
  auto* c_schmidt = app.add_subcommand("schmidt", "Schmidt decomposition of a pure state");
  c_schmidt->add_option("state", a1)->required();
  on(c_schmidt, [&] {
    const SchmidtDecomposition s = schmidt(load_state(a1));
    emit({{"coefficients", s.coefficients},
          {"spectrum", std::vector<double>(s.spectrum.values().begin(), s.spectrum.values().end())},
          {"rank", s.rank()},
          {"basis_A", io::to_json(s.basis_A)},
          {"basis_B", io::to_json(s.basis_B)}});
  });

  auto* c_marg = app.add_subcommand("marginal", "Reduced density matrix of a pure state");
  c_marg->add_option("state", a1)->required();
  c_marg->add_option("--party", party)->check(CLI::IsMember({"A", "B"}));
  on(c_marg, [&] { emit(io::to_json(marginal(load_state(a1), party == "A" ? Party::A : Party::B))); });

  auto* c_dist = app.add_subcommand("distinguish", "Trace distance, fidelity and Fuchs-van de Graaf bounds");
  c_dist->add_option("rho", a1)->required();
  c_dist->add_option("sigma", a2)->required();
  on(c_dist, [&] {
    const DensityMatrix r = load_density(a1), s = load_density(a2);
    const double td = trace_distance(r, s), f = fidelity(r, s);
    emit({{"trace_distance", td},
          {"fidelity", f},
          {"fvdg_lower", 1.0 - std::sqrt(f)},
          {"fvdg_upper", std::sqrt(std::max(0.0, 1.0 - f))},
          {"helstrom_success", 0.5 + 0.25 * td},
          {"orbit_distance", orbit_distance(spectrum(r), spectrum(s))}});
  });

  auto* c_align = app.add_subcommand("align", "Unitary minimizing ||rho - u sigma u*||_1");
  c_align->add_option("rho", a1)->required();
  c_align->add_option("sigma", a2)->required();
  on(c_align, [&] {
    const DensityMatrix r = load_density(a1), s = load_density(a2);
    const Matrix u = align_unitary(r, s);
    emit({{"unitary", io::to_json(u)},
          {"achieved", trace_norm(r.matrix() - u * s.matrix() * u.adjoint())},
          {"orbit_distance", orbit_distance(spectrum(r), spectrum(s))}});
  });

  auto* c_uhl = app.add_subcommand("uhlmann", "Purifications and the Uhlmann unitary");
  c_uhl->add_option("rho", a1)->required();
  c_uhl->add_option("sigma", a2)->required();
  on(c_uhl, [&] {
    const DensityMatrix r = load_density(a1), s = load_density(a2);
    const Matrix u = uhlmann_unitary(r, s);
    const PureBipartiteState pr = purify(r), ps = purify(s);
    const int dd = r.dim();
    const Vector moved = apply_local(Matrix::Identity(dd, dd), u, ps.amplitudes(), dd, dd);
    emit({{"fidelity", fidelity(r, s)},
          {"purified_overlap", overlap_squared(pr.amplitudes(), moved)},
          {"unitary", io::to_json(u)}});
  });

  auto* c_lu = app.add_subcommand("lu", "Local-unitary orbit fidelity of two pure states");
  c_lu->add_option("psi", a1)->required();
  c_lu->add_option("phi", a2)->required();
  on(c_lu, [&] {
    const PureBipartiteState p = load_state(a1), q = load_state(a2);
    const auto [uA, uB] = lu_aligning_unitaries(p, q);
    emit({{"fidelity", lu_orbit_fidelity(p, q)}, {"op_A", io::to_json(uA)}, {"op_B", io::to_json(uB)}});
  });

  auto* c_conn = app.add_subcommand("connect", "B-side isometry between purifications of one marginal");
  c_conn->add_option("phi1", a1)->required();
  c_conn->add_option("phi2", a2)->required();
  on(c_conn, [&] {
    const LocalIsometryPair pr = connect_purifications(load_state(a1), load_state(a2), 1e-8);
    emit({{"op_A", io::to_json(pr.op_A)}, {"op_B", io::to_json(pr.op_B)}});
  });

  auto* c_coup = app.add_subcommand("coupling", "Coupling constant d_A / d_B");
  c_coup->add_option("--dA", dA)->required();
  c_coup->add_option("--dB", dB)->required();
  on(c_coup, [&] { emit({{"coupling_constant", coupling_constant(dA, dB)}}); });

  auto* c_haar = app.add_subcommand("haar", "Seeded Haar-random unitary");
  c_haar->add_option("--d", d)->required()->check(CLI::PositiveNumber);
  on(c_haar, [&] { emit(io::to_json(haar_unitary(d, cfg.seed))); });

  auto* c_mono = app.add_subcommand("monotones", "Entropies, Renyi entropies, Schmidt rank, E_f");
  c_mono->add_option("state", a1)->required();
  c_mono->add_option("--alpha", alphas)->delimiter(',');
  c_mono->add_option("--f", fspec, "xlogx, support, power:a or hinge:c");
  on(c_mono, [&] {
    const Spectrum s = schmidt_spectrum(load_state(a1));
    json j = entropies_json(entanglement_entropies(s, alphas));
    j["E_f"] = monotone_Ef(spectral_scale(s), parse_monotone(fspec));
    emit(j);
  });

  // ---- spectra
  auto* c_spec = app.add_subcommand("spectra", "Spectral scales, majorization and spectral states");
  c_spec->require_subcommand(1);
  const auto spec_cmd = [&](const char* name, const char* help) {
    auto* sub = c_spec->add_subcommand(name, help);
    sub->add_option("--spectrum", values)->required()->delimiter(',');
    return sub;
  };
  auto* s_scale = spec_cmd("scale", "Spectral scale step function");
  on(s_scale, [&] { emit(io::to_json(spectral_scale(Spectrum(values)))); });
  auto* s_dist = spec_cmd("distribution", "Distribution function step function");
  on(s_dist, [&] { emit(io::to_json(distribution_function(Spectrum(values)))); });
  auto* s_orbit = spec_cmd("orbit", "Orbit distance and majorization between two spectra");
  s_orbit->add_option("--other", values2)->required()->delimiter(',');
  on(s_orbit, [&] {
    const Spectrum a(values), b(values2);
    emit({{"orbit_distance", orbit_distance(a, b)},
          {"l1_scale_distance", l1_distance(spectral_scale(a), spectral_scale(b))},
          {"a_majorizes_b", majorizes(a, b, cfg.tol)},
          {"b_majorizes_a", majorizes(b, a, cfg.tol)}});
  });
  auto* s_state = spec_cmd("state", "Spectral state");
  on(s_state, [&] { emit(io::to_json(spectral_state(Spectrum(values)))); });
  auto* s_flow = spec_cmd("flow", "Flow action on the spectral state");
  s_flow->add_option("--t", t)->required();
  on(s_flow, [&] { emit(io::to_json(flow_act(spectral_state(Spectrum(values)), t))); });
  auto* s_smear = spec_cmd("smear", "Smearing of the spectral state by omega");
  s_smear->add_option("--omega", values2)->required()->delimiter(',');
  on(s_smear, [&] { emit(io::to_json(smear(spectral_state(Spectrum(values)), Spectrum(values2)))); });
  auto* s_dev = spec_cmd("deviation", "Flow deviation ||m - m o theta_t||");
  s_dev->add_option("--t", t)->required();
  on(s_dev, [&] { emit({{"t", t}, {"deviation", flow_deviation(spectral_state(Spectrum(values)), t)}}); });

  // ---- LOCC
  auto* c_locc = app.add_subcommand("locc", "Pure-state LOCC");
  c_locc->require_subcommand(1);
  auto* l_dec = c_locc->add_subcommand("decide", "Exact LOCC feasibility psi -> phi");
  l_dec->add_option("psi", a1)->required();
  l_dec->add_option("phi", a2)->required();
  on(l_dec, [&] { emit({{"feasible", locc_feasible(load_state(a1), load_state(a2))}}); });

  auto* l_mix = c_locc->add_subcommand("mix", "Mixing decomposition of rho_psi by unitaries of rho_phi");
  l_mix->add_option("psi", a1)->required();
  l_mix->add_option("phi", a2)->required();
  on(l_mix, [&] {
    try {
      const MixingDecomposition mix = mixing_decomposition(load_density(a1), load_density(a2));
      json us = json::array();
      for (const auto& u : mix.unitaries) us.push_back(io::to_json(u));
      emit({{"feasible", true}, {"weights", mix.weights}, {"unitaries", std::move(us)}});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::infeasible) throw;
      emit({{"feasible", false}});
    }
  });

  auto* l_syn = c_locc->add_subcommand("synth", "Synthesize a one-way protocol psi -> phi");
  l_syn->add_option("psi", a1)->required();
  l_syn->add_option("phi", a2)->required();
  on(l_syn, [&] {
    try {
      emit(io::to_json(nielsen_synthesize(load_state(a1), load_state(a2))));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::infeasible) throw;
      emit({{"feasible", false}});
    }
  });

  auto* l_ver = c_locc->add_subcommand("verify", "Check a one-way protocol psi -> phi");
  l_ver->add_option("protocol", a1)->required();
  l_ver->add_option("psi", a2)->required();
  l_ver->add_option("phi", a3)->required();
  on(l_ver, [&] {
    VerifyTolerances tol;
    tol.completeness = cfg.tol;
    tol.probability = cfg.tol;
    const VerifyReport r =
        verify_protocol(io::one_way_from_json(io::read_file(a1)), load_state(a2), load_state(a3), tol);
    emit({{"pass", r.pass},
          {"probabilities", r.probabilities},
          {"overlaps", r.overlaps},
          {"completeness_residual", r.completeness_residual},
          {"probability_sum", r.probability_sum},
          {"min_overlap", r.min_overlap}});
  });

  auto* l_sim = c_locc->add_subcommand("simulate", "Branch tree of a protocol applied to psi");
  l_sim->add_option("protocol", a1)->required();
  l_sim->add_option("psi", a2)->required();
  on(l_sim, [&] {
    const json pj = io::read_file(a1);
    const PureBipartiteState psi = load_state(a2);
    if (io::kind_of(pj) == "one_way") emit(leaves_json(simulate(io::one_way_from_json(pj), psi)));
    else emit(leaves_json(simulate(io::protocol_from_json(pj), psi)));
  });

  auto* l_red = c_locc->add_subcommand("reduce", "Equivalent one-way protocol on psi");
  l_red->add_option("protocol", a1)->required();
  l_red->add_option("psi", a2)->required();
  on(l_red, [&] { emit(io::to_json(one_way_reduce(io::protocol_from_json(io::read_file(a1)), load_state(a2)))); });

  auto* l_emb = c_locc->add_subcommand("embezzle", "Exact LOCC decision psi (x) phi1 -> psi (x) phi2");
  l_emb->add_option("psi", a1)->required();
  l_emb->add_option("phi1", a2)->required();
  l_emb->add_option("phi2", a3)->required();
  on(l_emb, [&] { emit({{"feasible", locc_embezzle_feasible(load_state(a1), load_state(a2), load_state(a3))}}); });

  auto* c_slocc = app.add_subcommand("slocc", "Canonical SLOCC filter psi -> phi");
  c_slocc->add_option("psi", a1)->required();
  c_slocc->add_option("phi", a2)->required();
  on(c_slocc, [&] {
    const SloccResult r = slocc(load_state(a1), load_state(a2));
    json j = {{"feasible", r.feasible}, {"success_prob", r.success_prob}};
    if (r.filter) j["filter"] = {{"op_A", io::to_json(r.filter->op_A)}, {"op_B", io::to_json(r.filter->op_B)}};
    emit(j);
  });

  auto* c_one = app.add_subcommand("oneshot", "One-shot distillable maximally entangled rank");
  c_one->add_option("psi", a1)->required();
  on(c_one, [&] {
    const OneShot r = one_shot_entanglement(load_state(a1));
    emit({{"n_max", r.n_max}, {"ebits", r.ebits}});
  });

  // ---- embezzlement and the lambda-family
  auto* c_emb = app.add_subcommand("embezzle", "van Dam-Hayden embezzlement");
  c_emb->require_subcommand(1);
  auto* e_sweep = c_emb->add_subcommand("sweep", "Fidelity of Psi_n (x) start -> Psi_n (x) target over n");
  e_sweep->add_option("--d", d, "Target rank for the default maximally entangled target")
      ->check(CLI::PositiveNumber);
  e_sweep->add_option("--n-list", n_list)->required()->delimiter(',');
  e_sweep->add_option("--target", target, "bell (rank d) or a state");
  e_sweep->add_option("--start", start, "State (default product)");
  on(e_sweep, [&] {
    const PureBipartiteState tgt =
        target == "bell" ? PureBipartiteState::maximally_entangled(d) : load_state(target);
    const PureBipartiteState st = start.empty() ? PureBipartiteState::product(1, 1) : load_state(start);
    std::vector<std::size_t> ns = n_list;
    std::sort(ns.begin(), ns.end());
    for (std::size_t x : ns) {
      if (x < 1) fail(ErrorKind::invalid_input, "n must be >= 1");
    }
    const auto reports = parallel_map<EmbezzleReport>(
        ns.size(), [&](std::size_t i) { return embezzle_report(ns[i], st, tgt, false); });
    io::Table tab{{"n", "fidelity", "sqrt_fidelity", "bound", "sqrt_bound", "trace_error", "meets_bound"}, {}};
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const EmbezzleReport& r = reports[i];
      tab.rows.push_back({static_cast<std::int64_t>(ns[i]), r.fidelity, std::sqrt(r.fidelity), r.bound,
                          std::sqrt(r.bound), r.trace_error, r.meets_bound});
    }
    io::emit(tab, table_format(), cfg.out);
  });

  auto* c_vdh = app.add_subcommand("vdh", "van Dam-Hayden family members and bounds");
  c_vdh->require_subcommand(1);
  auto* v_state = c_vdh->add_subcommand("state", "Psi_n as a dense state");
  v_state->add_option("--n", n)->required()->check(CLI::Range(1, 4096));
  on(v_state, [&] { emit(io::to_json(vdh_state(n))); });
  auto* v_bound = c_vdh->add_subcommand("bound", "epsilon and fidelity bound for rank d, index n");
  v_bound->add_option("--d", d)->required();
  v_bound->add_option("--n", n)->required();
  on(v_bound, [&] {
    const VdhBound b = vdh_bound(d, n);
    emit({{"epsilon", b.epsilon}, {"fidelity_bound", b.fidelity_bound}});
  });

  auto* c_kappa = app.add_subcommand("kappa", "Flow deviation profiles and the diameter formula");
  c_kappa->require_subcommand(1);
  auto* k_prof = c_kappa->add_subcommand("profile", "Flow deviation over a t grid");
  k_prof->add_option("--family", family)->check(CLI::IsMember({"lambda", "spectrum"}));
  k_prof->add_option("--lambda", lambda);
  k_prof->add_option("--m", m)->check(CLI::PositiveNumber);
  k_prof->add_option("--spectrum", values)->delimiter(',');
  k_prof->add_option("--t-min", t_min);
  k_prof->add_option("--t-max", t_max);
  k_prof->add_option("--steps", steps);
  on(k_prof, [&] {
    const std::vector<double> grid = t_grid(t_min, t_max, steps);
    AtomicMeasure state;
    if (family == "lambda") {
      state = lambda_family_state(lambda, static_cast<std::size_t>(m));
    } else {
      if (values.empty()) fail(ErrorKind::invalid_input, "--family spectrum needs --spectrum");
      state = spectral_state(Spectrum(values));
    }
    const auto dev = parallel_map<double>(grid.size(), [&](std::size_t i) { return flow_deviation(state, grid[i]); });
    io::Table tab{{"t", "deviation"}, {}};
    for (std::size_t i = 0; i < grid.size(); ++i) tab.rows.push_back({grid[i], dev[i]});
    io::emit(tab, table_format(), cfg.out);
  });
  auto* k_max = c_kappa->add_subcommand("max", "State-space diameter 2(1 - sqrt l)/(1 + sqrt l)");
  auto* k_lambda = k_max->add_option("--lambda", lambda);
  auto* k_period = k_max->add_option("--period", period, "Minimal flow period T = -log lambda");
  k_lambda->excludes(k_period);
  on(k_max, [&] {
    if (k_period->count()) emit({{"period", period}, {"kappa_max", kappa_max_from_period(period)}});
    else emit({{"lambda", lambda}, {"kappa_max", kappa_max_formula(lambda)}});
  });

  auto* c_cat = app.add_subcommand("catalysis", "Catalytic deviation of the lambda-family");
  c_cat->require_subcommand(1);
  auto* cat_decay = c_cat->add_subcommand("decay", "catalytic_deviation over tensor powers m");
  cat_decay->add_option("--lambda", lambda)->required();
  cat_decay->add_option("--m-list", m_list)->required()->delimiter(',');
  auto* cat_t = cat_decay->add_option("--t", t, "Flow time (default log(1/lambda))");
  on(cat_decay, [&] {
    const double tt = cat_t->count() ? t : -std::log(lambda);
    std::vector<std::size_t> ms = m_list;
    std::sort(ms.begin(), ms.end());
    const auto dev = parallel_map<double>(ms.size(), [&](std::size_t i) { return catalytic_deviation(lambda, ms[i], tt); });
    io::Table tab{{"m", "t", "deviation"}, {}};
    for (std::size_t i = 0; i < ms.size(); ++i) tab.rows.push_back({static_cast<std::int64_t>(ms[i]), tt, dev[i]});
    io::emit(tab, table_format(), cfg.out);
  });

  auto* c_cls = app.add_subcommand("classify", "Type of the i.i.d. ITPFI factor with this site spectrum");
  c_cls->add_option("--spectrum", values)->required()->delimiter(',');
  on(c_cls, [&] { emit(io::to_json(classify_itpfi(values))); });

  auto* c_multi = app.add_subcommand("multilu", "Multipartite local-unitary fidelity estimate");
  c_multi->add_option("psi", a1, "Multipartite state file or ghz:N / product:N")->required();
  c_multi->add_option("phi", a2)->required();
  c_multi->add_option("--iters", iters)->check(CLI::PositiveNumber);
  on(c_multi, [&] {
    const auto load = [](const std::string& arg) {
      if (arg.rfind("ghz:", 0) == 0) return ghz_state(static_cast<int>(split_numbers(arg.substr(4)).at(0)));
      if (arg.rfind("product:", 0) == 0) {
        return product_state(std::vector<int>(static_cast<std::size_t>(split_numbers(arg.substr(8)).at(0)), 2));
      }
      return io::multipartite_from_json(io::read_file(arg));
    };
    const LuFidelityTrace r = multipartite_lu_fidelity(load(a1), load(a2), iters, cfg.seed);
    emit({{"fidelity", r.fidelity}, {"per_sweep", r.per_sweep}});
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (action) action();
    return 0;
  } catch (const Error& e) {
    std::cerr << "error[" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return exit_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error[numerical-failure]: " << e.what() << "\n";
    return 3;
  }
}
