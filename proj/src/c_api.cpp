#include "dnls/dnls.h"

#include <cstring>
#include <new>
#include <optional>
#include <string>

#include "dnls/acceptance.hpp"
#include "dnls/commands.hpp"
#include "dnls/errors.hpp"
#include "dnls/experiments.hpp"

struct dnls_config {
  dnls::RunConfig value;
};

struct dnls_grid {
  dnls::Grid value;
};

struct dnls_case {
  dnls::CaseResult value;
};

namespace {

thread_local std::string last_error;

template <class F>
dnls_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return DNLS_OK;
  } catch (const dnls::ConfigError& e) {
    last_error = e.what();
    return DNLS_CONFIG_ERROR;
  } catch (const dnls::InvalidArgument& e) {
    last_error = e.what();
    return DNLS_INVALID_ARGUMENT;
  } catch (const dnls::IoError& e) {
    last_error = e.what();
    return DNLS_IO_ERROR;
  } catch (const dnls::SimulationError& e) {
    last_error = e.what();
    return DNLS_SIMULATION_ERROR;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return DNLS_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    last_error = e.what();
    return DNLS_INTERNAL_ERROR;
  } catch (...) {
    last_error = "unknown error";
    return DNLS_INTERNAL_ERROR;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw dnls::InvalidArgument(what);
}

dnls::LineSink sink(dnls_line_fn log, void* user) {
  if (log == nullptr) return {};
  return [log, user](std::string_view line) {
    const std::string copy(line);
    log(copy.c_str(), user);
  };
}

dnls::ComplexField load_field(const dnls::Grid& grid, dnls::Side side, const double* in) {
  std::vector<dnls::Complex> values(grid.size());
  for (std::size_t j = 0; j < values.size(); ++j) values[j] = {in[2 * j], in[2 * j + 1]};
  return dnls::ComplexField(grid, side, std::move(values));
}

void store_field(const dnls::ComplexField& f, double* out) {
  for (std::size_t j = 0; j < f.size(); ++j) {
    out[2 * j] = f[j].real();
    out[2 * j + 1] = f[j].imag();
  }
}

}  // namespace

extern "C" {

const char* dnls_version(void) { return "1.0.0"; }

const char* dnls_status_string(dnls_status status) {
  switch (status) {
    case DNLS_OK: return "ok";
    case DNLS_INVALID_ARGUMENT: return "invalid argument";
    case DNLS_CONFIG_ERROR: return "configuration error";
    case DNLS_IO_ERROR: return "i/o error";
    case DNLS_SIMULATION_ERROR: return "simulation error";
    case DNLS_INTERNAL_ERROR: return "internal error";
  }
  return "unknown status";
}

const char* dnls_last_error(void) { return last_error.c_str(); }

dnls_status dnls_config_parse(const char* text, dnls_config** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "dnls_config_parse: null argument");
    *out = new dnls_config{dnls::parse_config(text)};
  });
}

dnls_status dnls_config_load(const char* path, dnls_config** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "dnls_config_load: null argument");
    *out = new dnls_config{dnls::load_config(path)};
  });
}

dnls_status dnls_config_scenario(const char* name, dnls_config** out) {
  return guarded([&] {
    require(name != nullptr && out != nullptr, "dnls_config_scenario: null argument");
    *out = new dnls_config{dnls::scenario_config(dnls::parse_scenario(name))};
  });
}

dnls_status dnls_config_set_output_dir(dnls_config* config, const char* dir) {
  return guarded([&] {
    require(config != nullptr && dir != nullptr && *dir != '\0', "dnls_config_set_output_dir: bad argument");
    config->value.output_dir = dir;
  });
}

dnls_status dnls_config_serialize(const dnls_config* config, char* buffer, size_t capacity, size_t* needed) {
  return guarded([&] {
    require(config != nullptr, "dnls_config_serialize: null config");
    const auto text = dnls::serialize_config(config->value);
    if (needed != nullptr) *needed = text.size() + 1;
    if (buffer != nullptr && capacity > 0) {
      const std::size_t n = std::min(capacity - 1, text.size());
      std::memcpy(buffer, text.data(), n);
      buffer[n] = '\0';
    }
  });
}

void dnls_config_free(dnls_config* config) { delete config; }

dnls_status dnls_grid_create(size_t n, double length, dnls_grid** out) {
  return guarded([&] {
    require(out != nullptr, "dnls_grid_create: null output");
    *out = new dnls_grid{dnls::make_grid(n, length)};
  });
}

size_t dnls_grid_size(const dnls_grid* grid) { return grid != nullptr ? grid->value.size() : 0; }

dnls_status dnls_grid_x(const dnls_grid* grid, double* out) {
  return guarded([&] {
    require(grid != nullptr && out != nullptr, "dnls_grid_x: null argument");
    const auto x = grid->value.x();
    std::copy(x.begin(), x.end(), out);
  });
}

dnls_status dnls_grid_xi(const dnls_grid* grid, double* out) {
  return guarded([&] {
    require(grid != nullptr && out != nullptr, "dnls_grid_xi: null argument");
    const auto xi = grid->value.xi();
    std::copy(xi.begin(), xi.end(), out);
  });
}

dnls_status dnls_forward_ft(const dnls_grid* grid, const double* in, double* out) {
  return guarded([&] {
    require(grid != nullptr && in != nullptr && out != nullptr, "dnls_forward_ft: null argument");
    store_field(dnls::forward_ft(load_field(grid->value, dnls::Side::space, in)), out);
  });
}

dnls_status dnls_inverse_ft(const dnls_grid* grid, const double* in, double* out) {
  return guarded([&] {
    require(grid != nullptr && in != nullptr && out != nullptr, "dnls_inverse_ft: null argument");
    store_field(dnls::inverse_ft(load_field(grid->value, dnls::Side::frequency, in)), out);
  });
}

dnls_status dnls_free_propagate(const dnls_grid* grid, const double* in, double t, double* out) {
  return guarded([&] {
    require(grid != nullptr && in != nullptr && out != nullptr, "dnls_free_propagate: null argument");
    store_field(dnls::free_propagate(load_field(grid->value, dnls::Side::space, in), t), out);
  });
}

void dnls_grid_free(dnls_grid* grid) { delete grid; }

dnls_status dnls_case_run(const dnls_config* config, double epsilon, dnls_case** out) {
  return guarded([&] {
    require(config != nullptr && out != nullptr, "dnls_case_run: null argument");
    *out = new dnls_case{dnls::run_case(config->value, epsilon)};
  });
}

size_t dnls_case_grid_size(const dnls_case* c) { return c != nullptr ? c->value.psi_hat1.size() : 0; }

double dnls_case_threshold(const dnls_case* c) { return c != nullptr ? c->value.threshold : 0.0; }

size_t dnls_case_snapshot_count(const dnls_case* c) { return c != nullptr ? c->value.run.snapshots.size() : 0; }

dnls_status dnls_case_snapshot_time(const dnls_case* c, size_t index, double* t) {
  return guarded([&] {
    require(c != nullptr && t != nullptr, "dnls_case_snapshot_time: null argument");
    require(index < c->value.run.snapshots.size(), "dnls_case_snapshot_time: index out of range");
    *t = c->value.run.snapshots[index].t;
  });
}

dnls_status dnls_case_m(const dnls_case* c, int method, double* out) {
  return guarded([&] {
    require(c != nullptr && out != nullptr, "dnls_case_m: null argument");
    require(method == 0 || method == 1, "dnls_case_m: method must be 0 (endpoint) or 1 (integral)");
    const auto& v = method == 0 ? c->value.m_end.values : c->value.m_int.values;
    std::copy(v.begin(), v.end(), out);
  });
}

dnls_status dnls_case_defects(const dnls_case* c, double out[5]) {
  return guarded([&] {
    require(c != nullptr && out != nullptr, "dnls_case_defects: null argument");
    const auto& r = c->value.record;
    out[0] = r.lemma_defect[0];
    out[1] = r.lemma_defect[1];
    out[2] = r.theorem_defect;
    out[3] = r.tail_estimate;
    out[4] = r.quadrature_error;
  });
}

void dnls_case_free(dnls_case* c) { delete c; }

dnls_status dnls_run_evolve(const dnls_config* config, dnls_line_fn log, void* user) {
  return guarded([&] {
    require(config != nullptr, "dnls_run_evolve: null config");
    dnls::command_evolve(config->value, sink(log, user));
  });
}

dnls_status dnls_run_mprofile(const dnls_config* config, dnls_line_fn log, void* user) {
  return guarded([&] {
    require(config != nullptr, "dnls_run_mprofile: null config");
    dnls::command_mprofile(config->value, sink(log, user));
  });
}

dnls_status dnls_run_sweep(const dnls_config* config, unsigned max_workers, dnls_line_fn log, void* user) {
  return guarded([&] {
    require(config != nullptr, "dnls_run_sweep: null config");
    dnls::command_sweep(config->value, max_workers, sink(log, user));
  });
}

dnls_status dnls_run_scenario(const char* name, const char* output_dir, dnls_line_fn log, void* user) {
  return guarded([&] {
    require(name != nullptr && output_dir != nullptr, "dnls_run_scenario: null argument");
    dnls::command_scenario(dnls::parse_scenario(name), output_dir, sink(log, user));
  });
}

dnls_status dnls_run_verify(const int* only, size_t only_count, unsigned max_workers, dnls_line_fn log, void* user,
                            int* failures) {
  return guarded([&] {
    require(only_count == 0 || only != nullptr, "dnls_run_verify: null criterion list");
    dnls::AcceptanceOptions options;
    options.only.assign(only, only + only_count);
    options.max_workers = max_workers;
    const auto emit = sink(log, user);
    options.on_result = [&](const dnls::CriterionResult& r) {
      if (emit) emit(dnls::format_result(r));
    };
    int failed = 0;
    for (const auto& r : dnls::run_acceptance(options)) failed += r.pass ? 0 : 1;
    if (failures != nullptr) *failures = failed;
  });
}

}  // extern "C"
