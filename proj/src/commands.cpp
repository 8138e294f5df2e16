#include "dnls/commands.hpp"

#include <cstdio>
#include <filesystem>

#include "dnls/errors.hpp"
#include "dnls/experiments.hpp"
#include "dnls/table.hpp"

namespace dnls {

namespace {

void emit(const LineSink& log, const std::string& line) {
  if (log) log(line);
}

void prepare_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void wrote(const LineSink& log, const std::string& path) { emit(log, "wrote " + path); }

}  // namespace

std::string output_path(const RunConfig& config, std::string_view stem, double epsilon) {
  std::string name(stem);
  if (config.epsilons.size() > 1) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "_eps%g", epsilon);
    name += buf;
  }
  return join(config.output_dir, name + ".tsv");
}

void command_evolve(const RunConfig& config, const LineSink& log) {
  prepare_dir(config.output_dir);
  const Schedule schedule(config.schedule_spec());
  for (double eps : config.epsilons) {
    EvolveOptions options;
    options.observer_stride = config.observer_stride;
    const auto run = evolve(initial_state(config, eps), schedule, options);

    if (config.wants("trajectory")) {
      std::vector<std::vector<double>> rows;
      for (const auto& s : run.snapshots) {
        const auto sp = modified_amplitudes(s);
        rows.push_back({s.t, mass(s.u1), mass(s.u2), sup_norm(s.u1), sup_norm(s.u2), dissipation_rate(s),
                        orthogonality_defect(sp)});
      }
      const auto path = output_path(config, "trajectory", eps);
      write_table(path, {"t", "mass1", "mass2", "sup_norm1", "sup_norm2", "dissipation_rate", "orthogonality_defect"},
                  rows);
      wrote(log, path);
    }
    if (config.wants("observers")) {
      std::vector<std::vector<double>> rows;
      for (const auto& r : run.records) {
        rows.push_back({r.t, r.mass1, r.mass2, r.sup_norm, r.j_norm, r.dissipation_rate});
      }
      const auto path = output_path(config, "observers", eps);
      write_table(path, {"t", "mass1", "mass2", "sup_norm", "j_norm", "dissipation_rate"}, rows);
      wrote(log, path);
    }
    if (config.wants("fields")) {
      const auto& fin = run.snapshots.back();
      const auto x = fin.u1.grid().x();
      std::vector<std::vector<double>> rows;
      for (std::size_t j = 0; j < x.size(); ++j) {
        rows.push_back({x[j], fin.u1[j].real(), fin.u1[j].imag(), fin.u2[j].real(), fin.u2[j].imag()});
      }
      const auto path = output_path(config, "fields", eps);
      write_table(path, {"x", "re_u1", "im_u1", "re_u2", "im_u2"}, rows);
      wrote(log, path);
    }
    const auto ap = apriori_diagnostics(run.records, eps);
    const auto path = output_path(config, "evolve_summary", eps);
    write_report(path, {{"epsilon", format_double(eps)},
                        {"t_final", format_double(run.snapshots.back().t)},
                        {"steps", std::to_string(run.steps)},
                        {"max_mass_increase", format_double(run.max_mass_increase)},
                        {"c_inf", format_double(ap.c_inf)},
                        {"t_at_c_inf", format_double(ap.t_at_max)},
                        {"growth_exponent", format_double(ap.growth_exponent)}});
    wrote(log, path);
  }
}

void command_mprofile(const RunConfig& config, const LineSink& log) {
  prepare_dir(config.output_dir);
  for (double eps : config.epsilons) {
    const auto res = run_case(config, eps);
    const auto xi = res.psi_hat1.grid().xi();
    if (config.wants("mprofile")) {
      std::vector<std::vector<double>> rows;
      for (std::size_t j = 0; j < xi.size(); ++j) {
        rows.push_back({xi[j], res.m_end.values[j], res.m_int.values[j], res.tail.values[j]});
      }
      const auto path = output_path(config, "mprofile", eps);
      write_table(path, {"xi", "m_endpoint", "m_integral", "tail_estimate"}, rows);
      wrote(log, path);
    }
    std::array<std::size_t, 3> counts{};
    const auto tags = classify(res.m_end, res.threshold);
    for (auto t : tags) ++counts[static_cast<std::size_t>(t)];
    if (config.wants("classification")) {
      std::vector<std::vector<double>> rows;
      for (std::size_t j = 0; j < xi.size(); ++j) {
        rows.push_back({xi[j], res.m_end.values[j], static_cast<double>(tags[j])});
      }
      const auto path = output_path(config, "classification", eps);
      // tag: 0 first-survives, 1 second-survives, 2 both-vanish
      write_table(path, {"xi", "m", "tag"}, rows);
      wrote(log, path);
    }
    const auto path = output_path(config, "mprofile_summary", eps);
    write_report(path, {{"epsilon", format_double(eps)},
                        {"t_final", format_double(res.m_end.t_final)},
                        {"threshold", format_double(res.threshold)},
                        {"quadrature_error", format_double(res.m_int.quadrature_error)},
                        {"tail_exponent", format_double(res.tail.exponent)},
                        {"first_survives", std::to_string(counts[0])},
                        {"second_survives", std::to_string(counts[1])},
                        {"both_vanish", std::to_string(counts[2])}});
    wrote(log, path);
  }
}

void command_sweep(const RunConfig& config, unsigned max_workers, const LineSink& log) {
  prepare_dir(config.output_dir);
  const auto result = sweep(config, max_workers);
  if (config.wants("sweep")) {
    std::vector<std::vector<double>> rows;
    for (const auto& r : result.records) {
      rows.push_back({r.epsilon, r.lemma_defect[0], r.lemma_defect[1], r.theorem_defect, r.tail_estimate,
                      r.quadrature_error, r.runtime_seconds});
    }
    const auto path = join(config.output_dir, "sweep.tsv");
    write_table(path,
                {"epsilon", "lemma_defect1", "lemma_defect2", "theorem_defect", "tail_estimate", "quadrature_error",
                 "runtime_seconds"},
                rows);
    wrote(log, path);
  }
  if (result.records.size() < 4) {
    emit(log, "order fits skipped: fewer than 4 epsilon values");
    return;
  }
  if (config.wants("orderfit")) {
    const auto path = join(config.output_dir, "orderfit.tsv");
    auto row = [](const OrderFit& f) { return std::vector<double>{f.slope, f.log_intercept, f.residual}; };
    write_labeled_table(path, {"quantity", "slope", "log_intercept", "residual"},
                        {"lemma_defect1", "lemma_defect2", "theorem_defect"},
                        {row(result.lemma1), row(result.lemma2), row(result.theorem)});
    wrote(log, path);
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "order slopes: lemma1 %.4f  lemma2 %.4f  theorem %.4f", result.lemma1.slope,
                result.lemma2.slope, result.theorem.slope);
  emit(log, buf);
}

void command_scenario(Scenario scenario, const std::string& output_dir, const LineSink& log) {
  prepare_dir(output_dir);
  const auto rep = corollary_scenario(scenario);
  const std::string name = to_string(scenario);
  std::vector<std::vector<double>> rows;
  for (const auto& h : rep.history) rows.emplace_back(h.begin(), h.end());
  auto path = join(output_dir, "scenario_" + name + ".tsv");
  write_table(path, {"t", "alpha_norm1", "alpha_norm2", "mass1", "mass2", "orthogonality_defect"}, rows);
  wrote(log, path);

  auto yes = [](bool b) { return std::string(b ? "yes" : "no"); };
  const std::vector<std::pair<std::string, std::string>> summary{
      {"scenario", name},
      {"epsilon", format_double(rep.epsilon)},
      {"t_final", format_double(rep.t_final)},
      {"threshold", format_double(rep.threshold)},
      {"first_survives", std::to_string(rep.tag_counts[0])},
      {"second_survives", std::to_string(rep.tag_counts[1])},
      {"both_vanish", std::to_string(rep.tag_counts[2])},
      {"alpha_norm1_final", format_double(rep.alpha_norm_final[0])},
      {"alpha_norm2_final", format_double(rep.alpha_norm_final[1])},
      {"dominant_band_norm1", format_double(rep.dominant_band_norm[0])},
      {"dominant_band_norm2", format_double(rep.dominant_band_norm[1])},
      {"mass_ratio1", format_double(rep.mass_ratio[0])},
      {"mass_ratio2", format_double(rep.mass_ratio[1])},
      {"alpha_norm1_decreasing", yes(rep.alpha_norm_decreasing[0])},
      {"alpha_norm2_decreasing", yes(rep.alpha_norm_decreasing[1])},
      {"orthogonality_nonincreasing", yes(rep.orthogonality_nonincreasing)},
      {"m_positive_on_band", yes(rep.m_positive_on_band)},
      {"max_abs_m", format_double(rep.max_abs_m)}};
  path = join(output_dir, "scenario_" + name + "_summary.tsv");
  write_report(path, summary);
  wrote(log, path);
  for (const auto& [k, v] : summary) emit(log, k + " = " + v);
}

}  // namespace dnls
