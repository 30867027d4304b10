#include "channellab/cli.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "channellab/dilation.hpp"
#include "channellab/lyapunov.hpp"
#include "channellab/serialize.hpp"
#include "channellab/spectral.hpp"
#include "channellab/zoo.hpp"

#ifndef CHANNELLAB_VERSION
#define CHANNELLAB_VERSION "0.0.0"
#endif

namespace channellab::cli {

using nlohmann::json;

namespace {

struct UsageError : Error {
  using Error::Error;
};

// Exit code 2 with a report already written.
struct ReportedFailure {
  int code;
};

json read_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

json envelope(const std::string& command, const json& input, json report,
              const std::vector<std::string>& warnings = {}) {
  return {{"tool_version", CHANNELLAB_VERSION},
          {"input_digest", sha256_hex(input.dump())},
          {"command", command},
          {"report", std::move(report)},
          {"warnings", warnings}};
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

DensityMatrix parse_state(const std::string& spec, int dim) {
  if (spec == "mixed") return DensityMatrix::maximally_mixed(dim);
  if (spec.rfind("basis:", 0) == 0) {
    int k = 0;
    try {
      std::size_t used = 0;
      k = std::stoi(spec.substr(6), &used);
      if (used != spec.size() - 6) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw UsageError("bad basis index in state '" + spec + "'");
    }
    if (k < 0 || k >= dim) throw UsageError("basis index out of range in state '" + spec + "'");
    return DensityMatrix::basis_state(dim, k);
  }
  json j;
  try {
    j = json::parse(spec);
  } catch (const json::parse_error& e) {
    throw UsageError("state must be basis:k, mixed or an inline JSON matrix: " +
                     std::string(e.what()));
  }
  try {
    return DensityMatrix(io::matrix_from_json(j, dim, dim, "state"));
  } catch (const SchemaError& e) {
    throw UsageError(e.what());
  }
}

std::vector<Functional> parse_functionals(const std::string& list) {
  std::vector<Functional> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(functional_from_string(item));
    } catch (const PreconditionError& e) {
      throw UsageError(e.what());
    }
  }
  return out;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("CHANNELLAB_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError("CHANNELLAB_SEED must be a non-negative integer");
    }
  }
  return 0;
}

std::vector<int> cesaro_schedule(int n) {
  std::vector<int> points;
  for (int p = 9; p < n; p = p * 10 + 9) points.push_back(p);
  points.push_back(n);
  return points;
}

KrausChannel load_cpt_channel(const json& doc) {
  KrausChannel c = io::channel_from_json(doc).channel;
  require_cpt(c);
  return c;
}

int cmd_validate(const std::string& file, std::ostream& out) {
  const json doc = read_document(file);
  const io::ChannelDocument parsed = io::channel_from_json(doc);
  const ValidationReport r = validate_cpt(parsed.channel);
  json report = io::to_json(r);
  std::vector<std::string> warnings;
  if (parsed.stinespring) {
    try {
      parsed.stinespring->validate();
      report["stinespring_valid"] = true;
    } catch (const Error& e) {
      report["stinespring_valid"] = false;
      warnings.emplace_back(e.what());
    }
  }
  emit(out, envelope("validate", doc, report, warnings));
  return r.passed() ? ok : validation;
}

int cmd_classify(const std::string& file, bool with_oracle, int n_max, double tolerance,
                 std::uint64_t seed, std::ostream& out) {
  const json doc = read_document(file);
  const KrausChannel c = load_cpt_channel(doc);
  const SpectralReport r = analyze(c);
  json report = io::to_json(r);
  if (with_oracle) {
    const OracleResult o = orbit_oracle(c, n_max, tolerance, seed);
    json oracle = io::to_json(o);
    oracle["agrees"] = (o.verdict == OracleVerdict::mixing) == (r.verdict == Verdict::mixing);
    oracle["n_max"] = n_max;
    oracle["tolerance"] = tolerance;
    oracle["seed"] = seed;
    report["oracle"] = oracle;
  }
  emit(out, envelope("classify", doc, report, r.warnings));
  return ok;
}

int cmd_orbit(const std::string& file, const std::string& state, int n,
              const std::string& functionals, std::ostream& out) {
  if (n < 0) throw UsageError("--n must be non-negative");
  const json doc = read_document(file);
  const KrausChannel c = load_cpt_channel(doc);
  const std::vector<Functional> fs = parse_functionals(functionals);
  const DensityMatrix rho0 = parse_state(state, c.dim);
  const OrbitTrace trace = orbit(c, rho0, n, fs);
  for (int step = 0; step <= n; ++step) out << io::orbit_step_to_json(trace, step).dump() << '\n';
  return ok;
}

int cmd_dilation(const std::string& file, std::ostream& out, std::ostream& err) {
  const json doc = read_document(file);
  const ConservedDilation cd = io::dilation_from_json(doc);
  const ConservedValidationReport v = validate_conserved(cd);
  json report = {{"validation", io::to_json(v)}};
  if (!v.passed()) {
    std::string names;
    for (const std::string& f : v.failed) names += (names.empty() ? "" : ", ") + f;
    emit(out, envelope("dilation", doc, report, {"hypotheses failed: " + names}));
    err << "dilation: hypotheses failed: " << names << '\n';
    throw ReportedFailure{validation};
  }
  const ConsistencyReport r = cross_validate(cd);
  report["factorizing"] = io::to_json(r.factorizing);
  report["spectral"] = io::to_json(r.spectral);
  report["consistency"] = io::to_json(r);
  emit(out, envelope("dilation", doc, report, r.spectral.warnings));
  if (!r.consistent) {
    err << "dilation: factorizing and spectral analyses disagree\n";
    return numerical;
  }
  return ok;
}

int cmd_cesaro(const std::string& file, const std::string& state, int n, std::ostream& out) {
  if (n < 0) throw UsageError("--n must be non-negative");
  const json doc = read_document(file);
  const KrausChannel c = load_cpt_channel(doc);
  const DensityMatrix rho0 = parse_state(state, c.dim);
  const SpectralReport spectral = analyze(c);
  const auto points = cesaro_checkpoints(c, rho0, cesaro_schedule(n));

  json table = json::array();
  for (const auto& [step, avg] : points) {
    json row = {{"n", step}};
    if (spectral.fixed_point) {
      const double d = trace_distance(avg, *spectral.fixed_point);
      row["distance_to_fixed_point"] = d;
      row["scaled_distance"] = d * (step + 1);
    }
    table.push_back(row);
  }
  const DensityMatrix& final_avg = points.back().second;
  json report = {{"n", n},
                 {"average", io::to_json(final_avg.matrix())},
                 {"distance_to_fixed_point",
                  spectral.fixed_point ? json(trace_distance(final_avg, *spectral.fixed_point))
                                       : json(nullptr)},
                 {"checkpoints", table}};
  std::vector<std::string> warnings = spectral.warnings;
  if (!spectral.fixed_point) warnings.emplace_back("fixed point is not unique; no reference distance");
  emit(out, envelope("cesaro", doc, report, warnings));
  return ok;
}

int cmd_zoo_list(std::ostream& out) {
  json entries = json::array();
  for (const zoo::CatalogEntry& e : zoo::catalog()) {
    entries.push_back({{"name", e.name},
                       {"dim", e.dim},
                       {"parameters", e.default_parameters},
                       {"description", e.description}});
  }
  emit(out, envelope("zoo-list", json::object(), entries));
  return ok;
}

int cmd_zoo_emit(const std::string& name, const std::vector<std::string>& params, bool as_dilation,
                 std::ostream& out) {
  std::map<std::string, double> values;
  for (const std::string& p : params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--param expects key=value, got '" + p + "'");
    try {
      values[p.substr(0, eq)] = std::stod(p.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("--param value is not a number: '" + p + "'");
    }
  }
  if (as_dilation) {
    if (name == "partial-swap-dilation") {
      double theta = 0.0;
      for (const zoo::CatalogEntry& e : zoo::catalog())
        if (e.name == name) theta = e.default_parameters.at("theta");
      if (values.count("theta")) theta = values["theta"];
      emit(out, io::dilation_to_json(zoo::partial_swap_dilation(theta)));
      return ok;
    }
    if (name == "cz-dilation") {
      emit(out, io::dilation_to_json(zoo::cz_dilation()));
      return ok;
    }
    throw UsageError("'" + name + "' has no conserved-quantity dilation");
  }
  try {
    emit(out, io::channel_to_json(zoo::build(name, values)));
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }
  return ok;
}

}  // namespace

std::string sha256_hex(const std::string& text) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw NumericalError("SHA-256 digest failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"channellab: ergodicity and mixing analysis of quantum channels", "channellab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", CHANNELLAB_VERSION);

  std::string file;
  std::string state = "basis:0";
  std::string functionals;
  std::string zoo_name;
  std::vector<std::string> params;
  bool with_oracle = false;
  bool as_dilation = false;
  int n_max = 2000;
  int n_orbit = 20;
  int n_cesaro = 1000;
  double tolerance = 1e-8;
  std::uint64_t seed = 0;

  auto* validate = app.add_subcommand("validate", "check trace preservation and complete positivity");
  validate->add_option("file", file, "channel JSON document")->required();

  auto* classify = app.add_subcommand("classify", "spectral ergodicity/mixing verdict");
  classify->add_option("file", file, "channel JSON document")->required();
  classify->add_flag("--oracle", with_oracle, "cross-check with the brute-force orbit oracle");
  classify->add_option("--nmax", n_max, "oracle horizon")->capture_default_str();
  classify->add_option("--tol", tolerance, "oracle distance tolerance")->capture_default_str();
  classify->add_option("--seed", seed, "seed for random probe states (default: $CHANNELLAB_SEED or 0)");

  auto* orbit_cmd = app.add_subcommand("orbit", "JSON-lines trace of an orbit");
  orbit_cmd->add_option("file", file, "channel JSON document")->required();
  orbit_cmd->add_option("--state", state, "basis:k, mixed or inline JSON matrix")->capture_default_str();
  orbit_cmd->add_option("--n", n_orbit, "number of steps")->capture_default_str();
  orbit_cmd->add_option("--functionals", functionals,
                        "comma list of trivial_lyapunov, relative_entropy, von_neumann_entropy");

  auto* dilation = app.add_subcommand("dilation", "conserved-quantity dilation analysis");
  dilation->add_option("file", file, "dilation instance JSON document")->required();

  auto* cesaro = app.add_subcommand("cesaro", "Cesaro average of an orbit");
  cesaro->add_option("file", file, "channel JSON document")->required();
  cesaro->add_option("--state", state, "basis:k, mixed or inline JSON matrix")->capture_default_str();
  cesaro->add_option("--n", n_cesaro, "last index of the average")->capture_default_str();

  auto* zoo_list = app.add_subcommand("zoo-list", "list built-in channels");

  auto* zoo_emit = app.add_subcommand("zoo-emit", "print a built-in channel as JSON");
  zoo_emit->add_option("name", zoo_name, "catalog name")->required();
  zoo_emit->add_option("--param", params, "key=value parameter override");
  zoo_emit->add_flag("--dilation", as_dilation, "emit the dilation instance document instead");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForVersion& e) {
    out << CHANNELLAB_VERSION << '\n';
    return ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return usage;
  }

  try {
    if (!classify->count("--seed")) seed = default_seed();
    if (*validate) return cmd_validate(file, out);
    if (*classify) return cmd_classify(file, with_oracle, n_max, tolerance, seed, out);
    if (*orbit_cmd) return cmd_orbit(file, state, n_orbit, functionals, out);
    if (*dilation) return cmd_dilation(file, out, err);
    if (*cesaro) return cmd_cesaro(file, state, n_cesaro, out);
    if (*zoo_list) return cmd_zoo_list(out);
    if (*zoo_emit) return cmd_zoo_emit(zoo_name, params, as_dilation, out);
  } catch (const ReportedFailure& f) {
    return f.code;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return validation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return numerical;
  }
  return usage;
}

}  // namespace channellab::cli
