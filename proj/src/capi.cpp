#include "intervalkit.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "intervalkit/errors.hpp"
#include "intervalkit/experiment.hpp"
#include "intervalkit/families.hpp"
#include "intervalkit/map.hpp"
#include "intervalkit/version.hpp"

using intervalkit::Error;
using intervalkit::ErrorCode;

struct ik_map {
  intervalkit::MapSpec spec;
};

struct ik_result {
  intervalkit::ExperimentResult result;
  std::string json_cache;
};

namespace {

thread_local std::string g_last_error;

ik_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return IK_ERR_INVALID_ARGUMENT;
    case ErrorCode::out_of_domain: return IK_ERR_OUT_OF_DOMAIN;
    case ErrorCode::side_required: return IK_ERR_SIDE_REQUIRED;
    case ErrorCode::undefined_derivative: return IK_ERR_UNDEFINED_DERIVATIVE;
    case ErrorCode::singular_derivative: return IK_ERR_SINGULAR_DERIVATIVE;
    case ErrorCode::unknown_family: return IK_ERR_UNKNOWN_FAMILY;
    case ErrorCode::invalid_params: return IK_ERR_INVALID_PARAMS;
    case ErrorCode::degenerate_fit: return IK_ERR_DEGENERATE_FIT;
    case ErrorCode::no_convergence: return IK_ERR_NO_CONVERGENCE;
    case ErrorCode::config_error: return IK_ERR_CONFIG;
    case ErrorCode::execution_error: return IK_ERR_EXECUTION;
  }
  return IK_ERR_EXECUTION;
}

template <typename Fn>
ik_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return IK_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return IK_ERR_EXECUTION;
  } catch (...) {
    g_last_error = "unknown error";
    return IK_ERR_EXECUTION;
  }
}

ik_status bad_argument(const char* what) {
  g_last_error = what;
  return IK_ERR_INVALID_ARGUMENT;
}

intervalkit::Side to_side(ik_side side) {
  switch (side) {
    case IK_SIDE_LEFT: return intervalkit::Side::left;
    case IK_SIDE_RIGHT: return intervalkit::Side::right;
    default: return intervalkit::Side::interior;
  }
}

std::string trimmed(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::map<std::string, double> parse_params(const char* params) {
  std::map<std::string, double> out;
  if (!params) return out;
  std::string text(params);
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string item = trimmed(
        text.substr(pos, comma == std::string::npos ? comma : comma - pos));
    pos = comma == std::string::npos ? text.size() : comma + 1;
    if (item.empty()) continue;
    std::size_t eq = item.find('=');
    if (eq == std::string::npos) {
      intervalkit::fail(ErrorCode::invalid_params,
                        "expected key=value, got '" + item + "'");
    }
    std::string key = trimmed(item.substr(0, eq));
    std::string value = trimmed(item.substr(eq + 1));
    char* end = nullptr;
    double v = std::strtod(value.c_str(), &end);
    if (key.empty() || end == value.c_str() || *end != '\0') {
      intervalkit::fail(ErrorCode::invalid_params,
                        "bad parameter value in '" + item + "'");
    }
    out[key] = v;
  }
  return out;
}

}  // namespace

extern "C" {

const char* ik_version(void) { return intervalkit::kVersion; }

const char* ik_status_name(ik_status status) {
  switch (status) {
    case IK_OK: return "OK";
    case IK_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case IK_ERR_OUT_OF_DOMAIN: return "OutOfDomain";
    case IK_ERR_SIDE_REQUIRED: return "SideRequired";
    case IK_ERR_UNDEFINED_DERIVATIVE: return "UndefinedDerivative";
    case IK_ERR_SINGULAR_DERIVATIVE: return "SingularDerivative";
    case IK_ERR_UNKNOWN_FAMILY: return "UnknownFamily";
    case IK_ERR_INVALID_PARAMS: return "InvalidParams";
    case IK_ERR_DEGENERATE_FIT: return "DegenerateFit";
    case IK_ERR_NO_CONVERGENCE: return "NoConvergence";
    case IK_ERR_CONFIG: return "ConfigError";
    case IK_ERR_EXECUTION: return "ExecutionError";
  }
  return "Unknown";
}

const char* ik_last_error(void) { return g_last_error.c_str(); }

ik_status ik_map_create(const char* family, const char* params, ik_map** out) {
  if (!family || !out) return bad_argument("family and out must be non-null");
  *out = nullptr;
  return guarded([&] {
    auto spec = intervalkit::make_builtin(family, parse_params(params));
    *out = new ik_map{std::move(spec)};
  });
}

void ik_map_free(ik_map* map) { delete map; }

ik_status ik_map_eval(const ik_map* map, double x, ik_side side, double* out) {
  if (!map || !out) return bad_argument("map and out must be non-null");
  return guarded([&] { *out = map->spec.eval(x, to_side(side)); });
}

ik_status ik_map_deriv(const ik_map* map, double x, int order, ik_side side,
                       double* out) {
  if (!map || !out) return bad_argument("map and out must be non-null");
  return guarded([&] { *out = map->spec.deriv(x, order, to_side(side)); });
}

ik_status ik_map_schwarzian(const ik_map* map, double x, double* out) {
  if (!map || !out) return bad_argument("map and out must be non-null");
  return guarded([&] { *out = map->spec.schwarzian(x); });
}

int ik_map_branch_count(const ik_map* map) {
  return map ? static_cast<int>(map->spec.branches().size()) : 0;
}

int ik_map_critical_count(const ik_map* map) {
  return map ? static_cast<int>(map->spec.critical_points().size()) : 0;
}

ik_status ik_map_describe(const ik_map* map, char** json_out) {
  if (!map || !json_out) {
    return bad_argument("map and json_out must be non-null");
  }
  *json_out = nullptr;
  return guarded([&] {
    std::string text = map->spec.to_json().dump(2);
    char* copy = static_cast<char*>(std::malloc(text.size() + 1));
    if (!copy) throw std::bad_alloc();
    std::memcpy(copy, text.c_str(), text.size() + 1);
    *json_out = copy;
  });
}

void ik_string_free(char* s) { std::free(s); }

ik_status ik_run(const char* config_text,
                 const unsigned long long* seed_override, ik_result** out) {
  if (!config_text || !out) {
    return bad_argument("config_text and out must be non-null");
  }
  *out = nullptr;
  return guarded([&] {
    std::optional<std::uint64_t> seed;
    if (seed_override) seed = *seed_override;
    auto result = intervalkit::run_experiment(config_text, seed);
    *out = new ik_result{std::move(result), {}};
  });
}

const char* ik_result_analysis(const ik_result* result) {
  return result ? result->result.analysis.c_str() : "";
}

const char* ik_result_verdict(const ik_result* result) {
  return result ? result->result.verdict.c_str() : "";
}

const char* ik_result_summary(const ik_result* result) {
  return result ? result->result.summary.c_str() : "";
}

const char* ik_result_json(const ik_result* result) {
  if (!result) return "";
  // Rendered lazily, once; the handle owns the string.
  auto* mutable_result = const_cast<ik_result*>(result);
  if (mutable_result->json_cache.empty()) {
    mutable_result->json_cache = result->result.report.dump(2);
    mutable_result->json_cache.push_back('\n');
  }
  return mutable_result->json_cache.c_str();
}

const char* ik_result_output_dir(const ik_result* result) {
  return result ? result->result.output_dir.c_str() : "";
}

const char* ik_result_formats(const ik_result* result) {
  return result ? result->result.formats.c_str() : "";
}

int ik_result_csv_count(const ik_result* result) {
  return result ? static_cast<int>(result->result.csv_files.size()) : 0;
}

const char* ik_result_csv_name(const ik_result* result, int index) {
  if (!result || index < 0 ||
      index >= static_cast<int>(result->result.csv_files.size())) {
    return "";
  }
  return result->result.csv_files[index].name.c_str();
}

const char* ik_result_csv_data(const ik_result* result, int index) {
  if (!result || index < 0 ||
      index >= static_cast<int>(result->result.csv_files.size())) {
    return "";
  }
  return result->result.csv_files[index].data.c_str();
}

void ik_result_free(ik_result* result) { delete result; }

}  // extern "C"
