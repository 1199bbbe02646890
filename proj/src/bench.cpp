#include "wigner/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "wigner/carrier.hpp"
#include "wigner/moyal.hpp"
#include "wigner/schrodinger.hpp"
#include "wigner/signed_paths.hpp"
#include "wigner/underdetermination.hpp"
#include "wigner/wigner_transform.hpp"

namespace wigner {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------- config

template <typename T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: wrong type for key '" + key + "'");
  }
}

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError("config: '" + where + "' must be an object");
}

void reject_unknown(const json& j, const std::string& where,
                    std::initializer_list<const char*> known) {
  for (const auto& [key, _] : j.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      throw ConfigError("config: unknown key '" + where + key + "'");
    }
  }
}

bool is_even_positive(int n) { return n > 0 && n % 2 == 0; }

// ---------------------------------------------------------------- output helpers

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const std::vector<std::string> kRecordColumns = {
    "wigner_norm_error", "marginal_error_q", "marginal_error_p", "l2_error_absolute",
    "l2_error_relative", "total_variation", "sign_cancellation_ratio", "negativity_mass",
    "residual_activity", "source_mass", "sink_mass", "chi_q", "boundary_leakage",
    "moment_q", "moment_p", "moment_q2", "moment_p2", "moment_energy"};

std::vector<double> record_values(const DiagnosticsRecord& d) {
  return {d.wigner_norm_error, d.marginal_error_q, d.marginal_error_p, d.l2_error_absolute,
          d.l2_error_relative, d.total_variation, d.sign_cancellation_ratio, d.negativity_mass,
          d.residual_activity, d.source_mass, d.sink_mass, d.chi_q, d.boundary_leakage,
          d.moments.q, d.moments.p, d.moments.q2, d.moments.p2, d.moments.energy};
}

json record_json(const DiagnosticsRecord& d) {
  json j;
  j["time"] = d.time;
  const std::vector<double> v = record_values(d);
  for (std::size_t k = 0; k < v.size(); ++k) j[kRecordColumns[k]] = v[k];
  return j;
}

void add_record_columns(Series& s, const std::string& prefix) {
  for (const auto& c : kRecordColumns) s.columns.push_back(prefix + c);
}

void append(std::vector<double>& row, const std::vector<double>& v) {
  row.insert(row.end(), v.begin(), v.end());
}

json grid_json(const GridSpec& g) {
  return {{"n_q", g.n_q}, {"n_p", g.n_p}, {"n_y", g.n_y}, {"dq", g.dq},
          {"dp", g.dp},   {"dy", g.dy},   {"q_max", g.q_max}, {"p_max", g.p_max}};
}

json schedule_json(const StepSchedule& s) {
  return {{"n_steps", s.n_steps}, {"steps_per_sample", s.steps_per_sample}, {"dt", s.dt}};
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

std::vector<std::size_t> dump_indices(std::size_t n) {
  std::vector<std::size_t> idx = {0, (n - 1) / 2, n - 1};
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return idx;
}

bool is_dump_index(std::size_t k, std::size_t n) {
  const auto idx = dump_indices(n);
  return std::find(idx.begin(), idx.end(), k) != idx.end();
}

struct ReferenceRun {
  TdseResult tdse;
  std::vector<PhaseField> wigner;
};

ReferenceRun reference_run(const WaveField& psi0, const Potential& v, const TdseConfig& cfg) {
  ReferenceRun r;
  r.tdse = evolve_tdse(psi0, v, cfg);
  r.wigner.reserve(r.tdse.snapshots.size());
  for (const WaveField& psi : r.tdse.snapshots) {
    r.wigner.push_back(wigner_from_wavefunction(psi, psi0.grid));
  }
  return r;
}

double relative_difference(double a, double b) {
  return b != 0.0 ? std::abs(a - b) / std::abs(b) : std::abs(a);
}

json base_summary(const ScenarioConfig& cfg, const GridSpec& g) {
  json s;
  s["schema_version"] = kSummarySchemaVersion;
  s["scenario"] = cfg.scenario;
  s["config"] = config_to_json(cfg);
  s["grid"] = grid_json(g);
  return s;
}

// ---------------------------------------------------------------- scenarios

ScenarioOutput harmonic_null(const ScenarioConfig& cfg) {
  const GridSpec g = cfg.grid();
  const Potential v = Potential::harmonic();
  const EvolutionConfig evo = cfg.evolution();
  const WaveField psi0 = init_superposition_02(g);
  const PhaseField w0 = wigner_from_wavefunction(psi0, g);
  const ReferenceRun ref = reference_run(psi0, v, evo.time);
  const EvolutionResult cl = evolve_classical_only(w0, v, evo);
  const EvolutionResult corr = evolve_with_residual(w0, v, evo);

  ScenarioOutput out;
  Series& s = out.series;
  s.columns = {"time",
               "rotation_error",
               "residual_norm",
               "split_difference",
               "tdse_norm_drift",
               "tdse_boundary_mass",
               "reference_norm_error",
               "reference_boundary_leakage"};
  add_record_columns(s, "");

  std::vector<double> rotation, residual, split, ref_norm, ref_leak, chi, norm_err, leak;
  const std::size_t n = cl.snapshots.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double t = cl.times[k];
    const PhaseField& w = cl.snapshots[k];
    const PhaseField rot = rotate_exact_harmonic(w0, t, evo.interpolation_points);
    const PhaseField q = moyal_residual(w, v);
    rotation.push_back(max_abs(w - rot));
    residual.push_back(l2_norm(q) / l2_norm(w));
    split.push_back(max_abs(corr.snapshots[k] - w));
    ref_norm.push_back(std::abs(integrate(ref.wigner[k]) - 1.0));
    ref_leak.push_back(boundary_leakage(ref.wigner[k], evo.time.boundary_cells));
    const DiagnosticsRecord d = compute_diagnostics(w, ref.wigner[k], v, t);
    chi.push_back(d.chi_q);
    norm_err.push_back(d.wigner_norm_error);
    leak.push_back(d.boundary_leakage);
    std::vector<double> row = {t,
                               rotation.back(),
                               residual.back(),
                               split.back(),
                               ref.tdse.norm_drift[k],
                               ref.tdse.boundary_mass[k],
                               ref_norm.back(),
                               ref_leak.back()};
    append(row, record_values(d));
    s.rows.push_back(std::move(row));
    if (k + 1 == n) out.summary["final"] = {{"transported", record_json(d)}};
    if (cfg.dump_fields && is_dump_index(k, n)) {
      out.fields.push_back({"reference", t, ref.wigner[k]});
      out.fields.push_back({"transported", t, w});
      out.fields.push_back({"rotated", t, rot});
    }
  }

  const Marginals m0 = marginals(w0);
  json& j = out.summary;
  j.update(base_summary(cfg, g));
  j["schedule"] = schedule_json(cl.schedule);
  j["rotation_error"] = max_of(rotation);
  j["residual_norm"] = max_of(residual);
  j["chi_q_max"] = max_of(chi);
  j["split_difference"] = max_of(split);
  j["tdse_norm_drift"] = max_of(ref.tdse.norm_drift);
  j["tdse_boundary_flag"] = ref.tdse.boundary_flag;
  j["reference_norm_error"] = max_of(ref_norm);
  j["reference_boundary_leakage"] = max_of(ref_leak);
  j["transported_norm_error"] = max_of(norm_err);
  j["transported_boundary_leakage"] = max_of(leak);
  j["marginal_error_t0_position"] = (m0.position - density(psi0)).cwiseAbs().maxCoeff();
  j["marginal_error_t0_momentum"] = (m0.momentum - momentum_density(psi0)).cwiseAbs().maxCoeff();
  return out;
}

ScenarioOutput quartic_compare(const ScenarioConfig& cfg) {
  const GridSpec g = cfg.grid();
  const Potential v = Potential::quartic(cfg.lambda);
  const EvolutionConfig evo = cfg.evolution();
  const WaveField psi0 = init_superposition_02(g);
  const PhaseField w0 = wigner_from_wavefunction(psi0, g);
  const ReferenceRun ref = reference_run(psi0, v, evo.time);
  const EvolutionResult cl = evolve_classical_only(w0, v, evo);

  ScenarioOutput out;
  Series& s = out.series;
  s.columns = {"time", "tdse_norm_drift", "reference_norm_error", "reference_boundary_leakage"};
  add_record_columns(s, "");
  std::vector<double> ref_norm, ref_leak, norm_err, leak;
  const std::size_t n = cl.snapshots.size();
  DiagnosticsRecord last;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = cl.times[k];
    const DiagnosticsRecord d = compute_diagnostics(cl.snapshots[k], ref.wigner[k], v, t);
    ref_norm.push_back(std::abs(integrate(ref.wigner[k]) - 1.0));
    ref_leak.push_back(boundary_leakage(ref.wigner[k], evo.time.boundary_cells));
    norm_err.push_back(d.wigner_norm_error);
    leak.push_back(d.boundary_leakage);
    std::vector<double> row = {t, ref.tdse.norm_drift[k], ref_norm.back(), ref_leak.back()};
    append(row, record_values(d));
    s.rows.push_back(std::move(row));
    last = d;
    if (cfg.dump_fields && is_dump_index(k, n)) {
      out.fields.push_back({"reference", t, ref.wigner[k]});
      out.fields.push_back({"classical", t, cl.snapshots[k]});
      out.fields.push_back({"classical_error", t, cl.snapshots[k] - ref.wigner[k]});
    }
  }

  json& j = out.summary;
  j = base_summary(cfg, g);
  j["schedule"] = schedule_json(cl.schedule);
  j["classical_error"] = last.l2_error_absolute;
  j["classical_error_relative"] = last.l2_error_relative;
  j["tdse_norm_drift"] = max_of(ref.tdse.norm_drift);
  j["tdse_boundary_flag"] = ref.tdse.boundary_flag;
  j["reference_norm_error"] = max_of(ref_norm);
  j["reference_boundary_leakage"] = max_of(ref_leak);
  j["classical_norm_error"] = max_of(norm_err);
  j["classical_boundary_leakage"] = max_of(leak);
  j["final"] = {{"classical", record_json(last)}};
  return out;
}

ScenarioOutput quartic_residual_field(const ScenarioConfig& cfg) {
  const GridSpec g = cfg.grid();
  const Potential v = Potential::quartic(cfg.lambda);
  const EvolutionConfig evo = cfg.evolution();
  const WaveField psi0 = init_superposition_02(g);
  const ReferenceRun ref = reference_run(psi0, v, evo.time);

  ScenarioOutput out;
  Series& s = out.series;
  s.columns = {"time",          "chi_q",          "epsilon_q",   "residual_activity",
               "source_mass",   "sink_mass",      "residual_norm", "classical_norm",
               "residual_mean", "reference_norm_error"};
  const std::size_t n = ref.wigner.size();
  std::vector<double> chi, mean;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = ref.tdse.times[k];
    const PhaseField& w = ref.wigner[k];
    const ResidualDiagnostics r = residual_diagnostics(w, v);
    const PhaseField q = moyal_residual(w, v);
    chi.push_back(r.chi_q);
    mean.push_back(std::abs(integrate(q)));
    s.rows.push_back({t, r.chi_q, r.epsilon_q.value_or(kNaN), r.activity, r.source_mass,
                      r.sink_mass, r.residual_norm, r.classical_norm, mean.back(),
                      std::abs(integrate(w) - 1.0)});
    if (cfg.dump_fields && is_dump_index(k, n)) {
      const SignedSplit split = hahn_jordan_split(q);
      out.fields.push_back({"reference", t, w});
      out.fields.push_back({"residual", t, q});
      out.fields.push_back({"residual_positive", t, split.positive_part});
      out.fields.push_back({"residual_negative", t, split.negative_part});
    }
  }

  // Linearity in lambda at the initial field.
  const PhaseField& w0 = ref.wigner.front();
  const PhaseField q1 = moyal_residual(w0, Potential::quartic(1.0));
  double linearity = 0.0;
  for (double lam : {0.01, 0.02, 0.05, 0.1}) {
    const PhaseField ql = moyal_residual(w0, Potential::quartic(lam));
    linearity = std::max(linearity, max_abs(ql - lam * q1) / (lam * max_abs(q1)));
  }

  json& j = out.summary;
  j = base_summary(cfg, g);
  j["schedule"] = schedule_json(ref.tdse.schedule);
  j["chi_q_t0"] = chi.front();
  j["chi_q_final"] = chi.back();
  j["chi_q_max"] = max_of(chi);
  j["residual_mean_max"] = max_of(mean);
  j["lambda_linearity_error"] = linearity;
  const auto& first = s.rows.front();
  const auto& last = s.rows.back();
  for (std::size_t c = 1; c < s.columns.size(); ++c) {
    j["initial"][s.columns[c]] = first[c];
    j["final"][s.columns[c]] = last[c];
  }
  return out;
}

ScenarioOutput quartic_reconstruct(const ScenarioConfig& cfg) {
  const GridSpec g = cfg.grid();
  const Potential v = Potential::quartic(cfg.lambda);
  const EvolutionConfig evo = cfg.evolution();
  const WaveField psi0 = init_superposition_02(g);
  const PhaseField w0 = wigner_from_wavefunction(psi0, g);
  const ReferenceRun ref = reference_run(psi0, v, evo.time);
  const EvolutionResult cl = evolve_classical_only(w0, v, evo);
  const EvolutionResult corr = evolve_with_residual(w0, v, evo);

  ScenarioOutput out;
  Series& s = out.series;
  s.columns = {"time", "reference_total_variation", "reference_chi_q", "reference_norm_error"};
  add_record_columns(s, "classical_");
  add_record_columns(s, "corrected_");
  const std::size_t n = cl.snapshots.size();
  std::vector<double> tv_track, norm_cl, norm_corr, leak_cl, leak_corr, leak_ref, norm_ref;
  DiagnosticsRecord last_cl, last_corr, last_ref;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = cl.times[k];
    const PhaseField& wr = ref.wigner[k];
    const DiagnosticsRecord dr = compute_diagnostics(wr, wr, v, t);
    const DiagnosticsRecord dc = compute_diagnostics(cl.snapshots[k], wr, v, t);
    const DiagnosticsRecord dk = compute_diagnostics(corr.snapshots[k], wr, v, t);
    tv_track.push_back(relative_difference(dk.total_variation, dr.total_variation));
    norm_cl.push_back(dc.wigner_norm_error);
    norm_corr.push_back(dk.wigner_norm_error);
    norm_ref.push_back(dr.wigner_norm_error);
    leak_cl.push_back(dc.boundary_leakage);
    leak_corr.push_back(dk.boundary_leakage);
    leak_ref.push_back(dr.boundary_leakage);
    std::vector<double> row = {t, dr.total_variation, dr.chi_q, dr.wigner_norm_error};
    append(row, record_values(dc));
    append(row, record_values(dk));
    s.rows.push_back(std::move(row));
    last_cl = dc;
    last_corr = dk;
    last_ref = dr;
    if (cfg.dump_fields && is_dump_index(k, n)) {
      out.fields.push_back({"reference", t, wr});
      out.fields.push_back({"classical", t, cl.snapshots[k]});
      out.fields.push_back({"corrected", t, corr.snapshots[k]});
      out.fields.push_back({"classical_error", t, cl.snapshots[k] - wr});
      out.fields.push_back({"corrected_error", t, corr.snapshots[k] - wr});
    }
  }

  json& j = out.summary;
  j = base_summary(cfg, g);
  j["schedule"] = schedule_json(cl.schedule);
  j["classical_error"] = last_cl.l2_error_absolute;
  j["classical_error_relative"] = last_cl.l2_error_relative;
  j["corrected_error"] = last_corr.l2_error_absolute;
  j["corrected_error_relative"] = last_corr.l2_error_relative;
  j["improvement_ratio"] = last_corr.l2_error_absolute > 0.0
                               ? last_cl.l2_error_absolute / last_corr.l2_error_absolute
                               : std::numeric_limits<double>::infinity();
  j["total_variation_tracking"] = max_of(tv_track);
  j["moment_error_q2"] = relative_difference(last_corr.moments.q2, last_ref.moments.q2);
  j["moment_error_p2"] = relative_difference(last_corr.moments.p2, last_ref.moments.p2);
  j["moment_error_energy"] =
      relative_difference(last_corr.moments.energy, last_ref.moments.energy);
  j["chi_q_t0"] = s.rows.front()[2];
  j["chi_q_final"] = last_ref.chi_q;
  j["tdse_norm_drift"] = max_of(ref.tdse.norm_drift);
  j["tdse_boundary_flag"] = ref.tdse.boundary_flag;
  j["reference_norm_error"] = max_of(norm_ref);
  j["classical_norm_error"] = max_of(norm_cl);
  j["corrected_norm_error"] = max_of(norm_corr);
  j["reference_boundary_leakage"] = max_of(leak_ref);
  j["classical_boundary_leakage"] = max_of(leak_cl);
  j["corrected_boundary_leakage"] = max_of(leak_corr);
  j["final"] = {{"reference", record_json(last_ref)},
                {"classical", record_json(last_cl)},
                {"corrected", record_json(last_corr)}};
  return out;
}

// Random ensemble: n paths, strictly positive laws, signed weights, and a
// few exactly zero weights when `with_zeros` is set.
PathEnsemble random_ensemble(std::mt19937_64& rng, int n, bool with_zeros) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::uniform_real_distribution<double> mag(0.01, 3.0);
  std::bernoulli_distribution neg(0.35);
  std::bernoulli_distribution zero(0.1);
  PathEnsemble e;
  e.prob_forward.resize(n);
  e.prob_reverse.resize(n);
  e.weight_forward.resize(n);
  e.weight_reverse.resize(n);
  for (int k = 0; k < n; ++k) {
    e.prob_forward(k) = u(rng);
    e.prob_reverse(k) = u(rng);
    e.weight_forward(k) = (neg(rng) ? -1.0 : 1.0) * mag(rng);
    e.weight_reverse(k) = (neg(rng) ? -1.0 : 1.0) * mag(rng);
    if (with_zeros && zero(rng)) e.weight_forward(k) = 0.0;
    if (with_zeros && zero(rng)) e.weight_reverse(k) = 0.0;
  }
  e.prob_forward /= e.prob_forward.sum();
  e.prob_reverse /= e.prob_reverse.sum();
  return e;
}

struct EnsembleStats {
  Eigen::Index included = 0;
  Eigen::Index negative = 0;
  ParityStats parity;
  double identity_residual = 0.0;
  double pathwise_error = 0.0;  // relative
  double max_abs_a_mag = 0.0;
  double decomposition_error = 0.0;
  double normalized_ratio = kNaN;
  double excluded_forward_mass = 0.0;
};

EnsembleStats ensemble_stats(const PathEnsemble& e) {
  const double floor = default_weight_floor(e);
  const RatioDecomposition d = ratio_decomposition(e, floor);
  const IntegralIdentity id = integral_identity_check(e, floor);
  EnsembleStats st;
  st.included = d.included_count;
  st.negative = (d.a_sign.array() < 0).count();
  st.parity = interference_parity_stats(d, e);
  st.identity_residual = id.residual;
  st.normalized_ratio = id.normalized_ratio.value_or(kNaN);
  st.excluded_forward_mass = id.excluded_forward_mass;
  for (Eigen::Index k = 0; k < e.size(); ++k) {
    if (!d.included[k]) continue;
    const double fwd = e.weight_forward(k) * e.prob_forward(k);
    const double rev = e.weight_reverse(k) * e.prob_reverse(k);
    const double rebuilt = d.a_sign(k) * std::exp(d.a_mag(k)) * rev;
    st.pathwise_error = std::max(st.pathwise_error, std::abs(rebuilt - fwd) / std::abs(fwd));
    st.max_abs_a_mag = std::max(st.max_abs_a_mag, std::abs(d.a_mag(k)));
    st.decomposition_error =
        std::max(st.decomposition_error, std::abs(d.a_mag(k) - d.a_cl(k) - d.a_w(k)));
  }
  return st;
}

json stats_json(const EnsembleStats& st) {
  return {{"included_count", st.included},
          {"negative_sign_count", st.negative},
          {"negative_fraction_count", st.parity.by_count},
          {"negative_fraction_mass", st.parity.by_mass},
          {"identity_residual", st.identity_residual},
          {"pathwise_error", st.pathwise_error},
          {"max_abs_a_mag", st.max_abs_a_mag},
          {"decomposition_error", st.decomposition_error},
          {"normalized_ratio", st.normalized_ratio},
          {"excluded_forward_mass", st.excluded_forward_mass}};
}

ScenarioOutput signed_path_demo(const ScenarioConfig& cfg) {
  const GridSpec g = cfg.grid();
  const Potential v = Potential::quartic(cfg.lambda);
  const EvolutionConfig evo = cfg.evolution();
  const WaveField psi0 = init_superposition_02(g);
  const ReferenceRun ref = reference_run(psi0, v, evo.time);

  ScenarioOutput out;
  Series& s = out.series;
  s.columns = {"time",
               "included_count",
               "negative_sign_count",
               "negative_fraction_count",
               "negative_fraction_mass",
               "identity_residual",
               "pathwise_error",
               "max_abs_a_mag",
               "normalized_ratio"};
  const std::size_t n = ref.wigner.size();
  std::vector<EnsembleStats> per_snapshot;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = ref.tdse.times[k];
    const PhaseField& w = ref.wigner[k];
    const PhaseField wr = theta_reflect(w);
    const EnsembleStats st = ensemble_stats(ensemble_from_wigner_fields(w, wr, default_envelope(w)));
    s.rows.push_back({t, double(st.included), double(st.negative), st.parity.by_count,
                      st.parity.by_mass, st.identity_residual, st.pathwise_error,
                      st.max_abs_a_mag, st.normalized_ratio});
    per_snapshot.push_back(st);
    if (cfg.dump_fields && is_dump_index(k, n)) {
      out.fields.push_back({"forward", t, w});
      out.fields.push_back({"reflected", t, wr});
    }
  }

  const PhaseField& w0 = ref.wigner.front();
  const EnsembleStats self0 = ensemble_stats(ensemble_from_wigner_fields(w0, w0, default_envelope(w0)));

  // Randomized ensembles: half with exactly zero weights (excluded paths).
  std::mt19937_64 rng(cfg.seed);
  constexpr int kEnsembles = 100;
  constexpr int kPaths = 50;
  double worst_pathwise = 0.0, worst_identity = 0.0, worst_decomposition = 0.0;
  int with_exclusions = 0;
  for (int r = 0; r < kEnsembles; ++r) {
    const PathEnsemble e = random_ensemble(rng, kPaths, r % 2 == 1);
    const EnsembleStats st = ensemble_stats(e);
    worst_pathwise = std::max(worst_pathwise, st.pathwise_error);
    worst_identity = std::max(worst_identity, st.identity_residual);
    worst_decomposition = std::max(worst_decomposition, st.decomposition_error);
    if (st.included < kPaths) ++with_exclusions;
  }

  json& j = out.summary;
  j = base_summary(cfg, g);
  j["schedule"] = schedule_json(ref.tdse.schedule);
  j["self_t0"] = stats_json(self0);
  j["theta_t0"] = stats_json(per_snapshot.front());
  j["theta_final"] = stats_json(per_snapshot.back());
  j["random"] = {{"ensembles", kEnsembles},
                 {"paths", kPaths},
                 {"ensembles_with_exclusions", with_exclusions},
                 {"pathwise_error", worst_pathwise},
                 {"identity_residual", worst_identity},
                 {"decomposition_error", worst_decomposition}};
  return out;
}

PhaseField gaussian_density(const GridSpec& g, double q0, double p0, double sq, double sp) {
  PhaseField f = PhaseField::sample(g, [&](double q, double p) {
    return std::exp(-0.5 * std::pow((q - q0) / sq, 2) - 0.5 * std::pow((p - p0) / sp, 2));
  });
  f.values /= integrate(f);
  return f;
}

double variance_along(const PhaseField& f, bool along_q) {
  const GridSpec& g = f.grid;
  const Eigen::VectorXd w = along_q ? Eigen::VectorXd(f.values.rowwise().sum())
                                    : Eigen::VectorXd(f.values.colwise().sum().transpose());
  const Eigen::VectorXd x = along_q ? g.q_axis() : g.p_axis();
  const double m0 = w.sum();
  const double m1 = w.dot(x) / m0;
  return w.dot(x.cwiseAbs2()) / m0 - m1 * m1;
}

ScenarioOutput underdetermination_demo(const ScenarioConfig& cfg) {
  const GridSpec g = make_phase_grid(128, 0.125, 128, 0.125);
  constexpr double kDiffusion = 0.1;
  constexpr double kDt = 0.001;
  constexpr int kSteps = 200;
  constexpr int kOrder = 2;  // moments M_0..M_2 are protected
  constexpr double kFloor = 1e-12;

  const PhaseField p0 = gaussian_density(g, 0.3, -0.2, 1.0, 1.0);
  const DiffusionField diff = DiffusionField::isotropic(g, kDiffusion);
  const CurrentPair zero{PhaseField(g), PhaseField(g)};
  const PhaseField bump = PhaseField::sample(g, [](double q, double p) {
    return 0.01 * std::exp(-((q - 0.5) * (q - 0.5) + (p - 0.4) * (p - 0.4)) / (2 * 0.25));
  });

  // Null-current perturbation translated back into a state-dependent drift.
  const DriftProvider null_drift = [&](const PhaseField& p) {
    const CurrentPair j = null_current_perturbation(current_from_drift(zero, diff, p), bump);
    return drift_from_current(j, diff, p, zero, kFloor);
  };
  // Moment-orthogonal current: dJ_q = g(q) h(p) with h orthogonal to 1, p, p^2.
  const Eigen::VectorXd h = orthogonal_momentum_profile(g, kOrder, 0.7);
  const PhaseField extra(g, PhaseField::Matrix(
                                0.05 * (-0.5 * (g.q_axis().array() / 0.7).square()).exp().matrix() *
                                h.transpose()));
  const DriftProvider moment_drift = [&](const PhaseField& p) {
    CurrentPair j = current_from_drift(zero, diff, p);
    j.q = j.q + extra;
    return drift_from_current(j, diff, p, zero, kFloor);
  };

  const FokkerPlanckResult base = fokker_planck_evolve(p0, zero, diff, kDt, kSteps);
  const FokkerPlanckResult pert = fokker_planck_evolve(p0, null_drift, diff, kDt, kSteps);
  const FokkerPlanckResult ext = fokker_planck_evolve(p0, moment_drift, diff, kDt, kSteps);

  const CurrentPair a1 = null_drift(p0);
  const double drift_l2 =
      std::sqrt(std::pow(l2_norm(a1.q), 2) + std::pow(l2_norm(a1.p), 2));
  const CurrentPair a2 = moment_drift(p0);
  const double moment_drift_l2 =
      std::sqrt(std::pow(l2_norm(a2.q), 2) + std::pow(l2_norm(a2.p), 2));

  ScenarioOutput out;
  Series& s = out.series;
  s.columns = {"time",
               "marginal_difference",
               "density_difference",
               "base_mass_drift",
               "perturbed_mass_drift",
               "low_moment_difference",
               "next_moment_difference",
               "extended_marginal_difference",
               "variance_q",
               "variance_p"};
  std::vector<double> marg, dens, low, next, mass;
  for (std::size_t k = 0; k < base.snapshots.size(); ++k) {
    const PhaseField& pb = base.snapshots[k];
    const Eigen::MatrixXd mb = moment_constraints(pb, kOrder + 1);
    const Eigen::MatrixXd me = moment_constraints(ext.snapshots[k], kOrder + 1);
    marg.push_back((marginals(pert.snapshots[k]).position - marginals(pb).position)
                       .cwiseAbs()
                       .maxCoeff());
    dens.push_back(max_abs(pert.snapshots[k] - pb));
    low.push_back((me.leftCols(kOrder + 1) - mb.leftCols(kOrder + 1)).cwiseAbs().maxCoeff());
    next.push_back((me.col(kOrder + 1) - mb.col(kOrder + 1)).cwiseAbs().maxCoeff());
    mass.push_back(std::max({base.mass_drift[k], pert.mass_drift[k], ext.mass_drift[k]}));
    s.rows.push_back({base.times[k], marg.back(), dens.back(), base.mass_drift[k],
                      pert.mass_drift[k], low.back(), next.back(),
                      (me.col(0) - mb.col(0)).cwiseAbs().maxCoeff(), variance_along(pb, true),
                      variance_along(pb, false)});
  }
  if (cfg.dump_fields) {
    const double tf = base.times.back();
    out.fields.push_back({"base_density", tf, base.snapshots.back()});
    out.fields.push_back({"null_current_bump", 0.0, bump});
    out.fields.push_back({"null_drift_q", 0.0, a1.q});
    out.fields.push_back({"null_drift_p", 0.0, a1.p});
  }

  json& j = out.summary;
  j = base_summary(cfg, g);
  j["fokker_planck"] = {{"dt", kDt}, {"steps", kSteps}, {"diffusion", kDiffusion},
                        {"moment_order", kOrder}, {"density_floor", kFloor}};
  j["drift_l2_difference"] = drift_l2;
  j["marginal_max_difference"] = max_of(marg);
  j["density_max_difference"] = max_of(dens);
  j["mass_drift"] = max_of(mass);
  j["positivity_warning"] =
      base.positivity_warning || pert.positivity_warning || ext.positivity_warning;
  j["moment_drift_l2_difference"] = moment_drift_l2;
  j["low_moment_max_difference"] = max_of(low);
  j["next_moment_final_difference"] = next.back();
  j["variance_q_final"] = s.rows.back()[8];
  j["variance_p_final"] = s.rows.back()[9];
  return out;
}

}  // namespace

// ---------------------------------------------------------------- config API

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {
      "harmonic-null",       "quartic-compare",    "quartic-residual-field",
      "quartic-reconstruct", "signed-path-demo",   "underdetermination-demo"};
  return names;
}

void ScenarioConfig::validate() const {
  const auto& names = scenario_names();
  if (std::find(names.begin(), names.end(), scenario) == names.end()) {
    throw ConfigError("unknown scenario '" + scenario + "'");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be >= 0");
  if (grid_preset != "balanced" && grid_preset != "reduced" && grid_preset != "oracle") {
    throw ConfigError("grid preset must be balanced, reduced or oracle");
  }
  if ((n_q && !is_even_positive(*n_q)) || (n_y && !is_even_positive(*n_y))) {
    throw ConfigError("grid sizes must be positive and even");
  }
  if ((dq && !(*dq > 0.0)) || (dy && !(*dy > 0.0))) {
    throw ConfigError("grid steps must be positive");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw ConfigError("t_final must be positive");
  if (n_samples < 2) throw ConfigError("n_samples must be at least 2");
  if (interpolation_points != 4 && interpolation_points != 6 && interpolation_points != 8) {
    throw ConfigError("interpolation_points must be 4, 6 or 8");
  }
  if (out_dir.empty()) throw ConfigError("output directory is empty");
  try {
    (void)grid();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

GridSpec ScenarioConfig::grid() const {
  GridSpec base = grid_preset == "reduced"  ? make_reduced_grid()
                  : grid_preset == "oracle" ? make_oracle_grid()
                                            : make_balanced_grid();
  if (!n_q && !dq && !n_y && !dy) return base;
  return make_grid(n_q.value_or(base.n_q), dq.value_or(base.dq), n_y.value_or(base.n_y),
                   dy.value_or(base.dy));
}

EvolutionConfig ScenarioConfig::evolution() const {
  EvolutionConfig e;
  e.time.dt = dt;
  e.time.t_final = t_final;
  e.time.n_samples = n_samples;
  e.interpolation_points = interpolation_points;
  e.splitting = splitting;
  e.residual_scheme = residual_scheme;
  return e;
}

ScenarioConfig apply_config_json(ScenarioConfig c, const json& j) {
  require_object(j, "<root>");
  reject_unknown(j, "", {"scenario", "lambda", "seed", "grid", "time", "scheme", "output"});
  if (j.contains("scenario")) c.scenario = get_as<std::string>(j["scenario"], "scenario");
  if (j.contains("lambda")) c.lambda = get_as<double>(j["lambda"], "lambda");
  if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j["seed"], "seed");
  if (j.contains("grid")) {
    const json& g = j["grid"];
    require_object(g, "grid");
    reject_unknown(g, "grid.", {"preset", "n_q", "dq", "n_y", "dy"});
    if (g.contains("preset")) c.grid_preset = get_as<std::string>(g["preset"], "grid.preset");
    if (g.contains("n_q")) c.n_q = get_as<int>(g["n_q"], "grid.n_q");
    if (g.contains("dq")) c.dq = get_as<double>(g["dq"], "grid.dq");
    if (g.contains("n_y")) c.n_y = get_as<int>(g["n_y"], "grid.n_y");
    if (g.contains("dy")) c.dy = get_as<double>(g["dy"], "grid.dy");
  }
  if (j.contains("time")) {
    const json& t = j["time"];
    require_object(t, "time");
    reject_unknown(t, "time.", {"dt", "t_final", "n_samples"});
    if (t.contains("dt")) c.dt = get_as<double>(t["dt"], "time.dt");
    if (t.contains("t_final")) c.t_final = get_as<double>(t["t_final"], "time.t_final");
    if (t.contains("n_samples")) c.n_samples = get_as<int>(t["n_samples"], "time.n_samples");
  }
  if (j.contains("scheme")) {
    const json& s = j["scheme"];
    require_object(s, "scheme");
    reject_unknown(s, "scheme.", {"splitting", "residual", "interpolation_points"});
    try {
      if (s.contains("splitting")) {
        c.splitting = parse_splitting(get_as<std::string>(s["splitting"], "scheme.splitting"));
      }
      if (s.contains("residual")) {
        c.residual_scheme =
            parse_residual_scheme(get_as<std::string>(s["residual"], "scheme.residual"));
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
    if (s.contains("interpolation_points")) {
      c.interpolation_points = get_as<int>(s["interpolation_points"], "scheme.interpolation_points");
    }
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    require_object(o, "output");
    reject_unknown(o, "output.", {"dir", "dump_fields"});
    if (o.contains("dir")) c.out_dir = get_as<std::string>(o["dir"], "output.dir");
    if (o.contains("dump_fields")) c.dump_fields = get_as<bool>(o["dump_fields"], "output.dump_fields");
  }
  return c;
}

json config_to_json(const ScenarioConfig& c) {
  json grid = {{"preset", c.grid_preset}};
  if (c.n_q) grid["n_q"] = *c.n_q;
  if (c.dq) grid["dq"] = *c.dq;
  if (c.n_y) grid["n_y"] = *c.n_y;
  if (c.dy) grid["dy"] = *c.dy;
  return {{"scenario", c.scenario},
          {"lambda", c.lambda},
          {"seed", c.seed},
          {"grid", grid},
          {"time", {{"dt", c.dt}, {"t_final", c.t_final}, {"n_samples", c.n_samples}}},
          {"scheme",
           {{"splitting", to_string(c.splitting)},
            {"residual", to_string(c.residual_scheme)},
            {"interpolation_points", c.interpolation_points}}},
          {"output", {{"dump_fields", c.dump_fields}}}};
}

// ---------------------------------------------------------------- runners

ScenarioOutput run_scenario_in_memory(const ScenarioConfig& cfg) {
  cfg.validate();
  if (cfg.scenario == "harmonic-null") return harmonic_null(cfg);
  if (cfg.scenario == "quartic-compare") return quartic_compare(cfg);
  if (cfg.scenario == "quartic-residual-field") return quartic_residual_field(cfg);
  if (cfg.scenario == "quartic-reconstruct") return quartic_reconstruct(cfg);
  if (cfg.scenario == "signed-path-demo") return signed_path_demo(cfg);
  return underdetermination_demo(cfg);
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot open '" + path.string() + "' for writing");
  return os;
}

void check_written(std::ofstream& os, const std::filesystem::path& path) {
  os.flush();
  if (!os) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace

json run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  const std::filesystem::path probe = cfg.out_dir / ".write_probe";
  {
    std::ofstream os(probe);
    if (ec || !os) {
      throw ConfigError("output directory '" + cfg.out_dir.string() + "' is not writable");
    }
  }
  std::filesystem::remove(probe, ec);

  const ScenarioOutput out = run_scenario_in_memory(cfg);
  write_series_csv(out.series, cfg.out_dir / "series.csv");
  for (const NamedField& f : out.fields) {
    emit_field_csv(f.field, cfg.out_dir / field_file_name(f.name, f.time));
  }
  const std::filesystem::path summary_path = cfg.out_dir / "summary.json";
  std::ofstream os = open_for_write(summary_path);
  os << dump_summary(out.summary);
  check_written(os, summary_path);
  return out.summary;
}

std::string dump_summary(const json& summary) { return summary.dump(2) + "\n"; }

void write_series_csv(const Series& s, const std::filesystem::path& path) {
  std::ofstream os = open_for_write(path);
  for (std::size_t c = 0; c < s.columns.size(); ++c) os << (c ? "," : "") << s.columns[c];
  os << '\n';
  for (const auto& row : s.rows) {
    if (row.size() != s.columns.size()) throw Error("write_series_csv: ragged row");
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_double(row[c]);
    os << '\n';
  }
  check_written(os, path);
}

void emit_field_csv(const PhaseField& w, const std::filesystem::path& path) {
  std::ofstream os = open_for_write(path);
  os << "q,p,value\n";
  const GridSpec& g = w.grid;
  std::string line;
  for (int i = 0; i < g.n_q; ++i) {
    const std::string q = format_double(g.q(i));
    for (int j = 0; j < g.n_p; ++j) {
      line = q;
      line += ',';
      line += format_double(g.p(j));
      line += ',';
      line += format_double(w.values(i, j));
      line += '\n';
      os << line;
    }
  }
  check_written(os, path);
}

PhaseField read_field_csv(const GridSpec& grid, const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(is, line) || line != "q,p,value") {
    throw Error("read_field_csv: missing header in '" + path.string() + "'");
  }
  PhaseField w(grid);
  const long expected = static_cast<long>(grid.n_q) * grid.n_p;
  long k = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (k >= expected) throw Error("read_field_csv: too many rows");
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw Error("read_field_csv: malformed row");
    }
    w.values(k / grid.n_p, k % grid.n_p) = std::stod(line.substr(c2 + 1));
    ++k;
  }
  if (k != expected) throw Error("read_field_csv: row count does not match grid");
  return w;
}

std::string field_file_name(const std::string& name, double time) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", time);
  return "field_" + name + "_t" + buf + ".csv";
}

}  // namespace wigner
