#include "bmcap/spec_io.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace bmcap {

using ordered_json = nlohmann::ordered_json;

namespace {

// Shortest decimal that round-trips the double.
std::string dtos(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string timestamp_utc() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int line_of_byte(std::string_view text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

std::vector<int> parse_tuple(const ordered_json& j, const char* key, int n0,
                             const std::string& where) {
  if (!j.contains(key))
    throw ParseError(where + ": missing tuple key '" + key + "'");
  const auto& arr = j.at(key);
  if (!arr.is_array() || arr.size() != static_cast<std::size_t>(n0))
    throw ParseError(where + ": '" + key + "' must be an array of " +
                     std::to_string(n0) + " symbols");
  std::vector<int> t;
  t.reserve(arr.size());
  for (const auto& e : arr) {
    if (!e.is_number_integer())
      throw ParseError(where + ": '" + key + "' entries must be integers");
    t.push_back(e.get<int>());
  }
  return t;
}

std::size_t tuple_key_index(const ordered_json& j, const char* key,
                            int radix, int n0, const std::string& where) {
  std::vector<int> t = parse_tuple(j, key, n0, where);
  try {
    return tuple_to_index(t, static_cast<std::size_t>(radix));
  } catch (const std::out_of_range&) {
    throw ParseError(where + ": '" + key +
                     "' symbol out of range for alphabet size " +
                     std::to_string(radix));
  }
}

int alphabet_size(const ordered_json& alphabets, const char* key) {
  if (!alphabets.contains(key))
    throw ParseError(std::string("alphabets: missing '") + key + "'");
  const auto& v = alphabets.at(key);
  if (!v.is_number_integer() || v.get<long>() < 1)
    throw ParseError(std::string("alphabets: '") + key +
                     "' must be a positive integer");
  return v.get<int>();
}

BlockChannelSpec parse_unvalidated(std::string_view text,
                                   std::string_view origin) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const int line = line_of_byte(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError(std::string(origin) + ":" + std::to_string(line) +
                         ": " + e.what(),
                     line);
  }
  if (!doc.is_object()) throw ParseError("spec document must be a JSON object");

  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "name" && key != "alphabets" && key != "n0" &&
        key != "channel" && key != "side_info")
      throw ParseError("unknown top-level key '" + key + "'");
  }
  for (const char* key : {"alphabets", "n0", "channel", "side_info"})
    if (!doc.contains(key))
      throw ParseError(std::string("missing required key '") + key + "'");

  BlockChannelSpec spec;
  spec.name = doc.value("name", std::string());
  const auto& alphabets = doc.at("alphabets");
  spec.x = {"x", alphabet_size(alphabets, "x")};
  spec.y = {"y", alphabet_size(alphabets, "y")};
  spec.s = {"s", alphabet_size(alphabets, "s")};
  spec.u = {"u", alphabet_size(alphabets, "u")};
  spec.v = {"v", alphabet_size(alphabets, "v")};
  if (!doc.at("n0").is_number_integer() || doc.at("n0").get<long>() < 1)
    throw ParseError("n0 must be a positive integer");
  spec.n0 = doc.at("n0").get<int>();

  spec.channel_kernel.assign(spec.nx() * spec.ns() * spec.ny(), 0.0);
  spec.side_info_joint.assign(spec.ns() * spec.nu() * spec.nv(), 0.0);

  std::size_t idx = 0;
  std::vector<bool> seen(spec.channel_kernel.size(), false);
  for (const auto& entry : doc.at("channel")) {
    const std::string where = "channel entry " + std::to_string(idx++);
    if (!entry.is_object() || !entry.contains("p") ||
        !entry.at("p").is_number())
      throw ParseError(where + ": must be an object with numeric 'p'");
    const std::size_t xi =
        tuple_key_index(entry, "x", spec.x.size, spec.n0, where);
    const std::size_t si =
        tuple_key_index(entry, "s", spec.s.size, spec.n0, where);
    const std::size_t yi =
        tuple_key_index(entry, "y", spec.y.size, spec.n0, where);
    const std::size_t flat = (xi * spec.ns() + si) * spec.ny() + yi;
    if (seen[flat]) throw ParseError(where + ": duplicate (x, s, y) key");
    seen[flat] = true;
    spec.channel_kernel[flat] = entry.at("p").get<double>();
  }

  idx = 0;
  std::vector<bool> seen_joint(spec.side_info_joint.size(), false);
  for (const auto& entry : doc.at("side_info")) {
    const std::string where = "side_info entry " + std::to_string(idx++);
    if (!entry.is_object() || !entry.contains("p") ||
        !entry.at("p").is_number())
      throw ParseError(where + ": must be an object with numeric 'p'");
    const std::size_t si =
        tuple_key_index(entry, "s", spec.s.size, spec.n0, where);
    const std::size_t ui =
        tuple_key_index(entry, "u", spec.u.size, spec.n0, where);
    const std::size_t vi =
        tuple_key_index(entry, "v", spec.v.size, spec.n0, where);
    const std::size_t flat = (si * spec.nu() + ui) * spec.nv() + vi;
    if (seen_joint[flat]) throw ParseError(where + ": duplicate (s, u, v) key");
    seen_joint[flat] = true;
    spec.side_info_joint[flat] = entry.at("p").get<double>();
  }
  return spec;
}

ordered_json tuple_json(std::size_t index, int radix, int n0) {
  return ordered_json(index_to_tuple(index, radix, n0));
}

}  // namespace

BlockChannelSpec parse_spec_text(std::string_view text,
                                 std::string_view origin) {
  BlockChannelSpec spec = parse_unvalidated(text, origin);
  ValidationReport report = validate_spec(spec);
  if (!report.ok())
    throw ValidationError(std::string(origin) +
                          ": spec validation failed: " + report.summary());
  return spec;
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open spec file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

BlockChannelSpec parse_spec(const std::filesystem::path& path) {
  return parse_spec_text(read_file(path), path.string());
}

BlockChannelSpec parse_spec_unvalidated(const std::filesystem::path& path) {
  return parse_unvalidated(read_file(path), path.string());
}

std::string serialize_spec(const BlockChannelSpec& spec) {
  ordered_json doc;
  if (!spec.name.empty()) doc["name"] = spec.name;
  doc["alphabets"] = {{"x", spec.x.size},
                      {"y", spec.y.size},
                      {"s", spec.s.size},
                      {"u", spec.u.size},
                      {"v", spec.v.size}};
  doc["n0"] = spec.n0;

  ordered_json channel = ordered_json::array();
  for (std::size_t xi = 0; xi < spec.nx(); ++xi)
    for (std::size_t si = 0; si < spec.ns(); ++si)
      for (std::size_t yi = 0; yi < spec.ny(); ++yi) {
        const double p = spec.channel(xi, si, yi);
        if (p == 0.0) continue;
        ordered_json e;
        e["x"] = tuple_json(xi, spec.x.size, spec.n0);
        e["s"] = tuple_json(si, spec.s.size, spec.n0);
        e["y"] = tuple_json(yi, spec.y.size, spec.n0);
        e["p"] = p;
        channel.push_back(std::move(e));
      }
  doc["channel"] = std::move(channel);

  ordered_json side = ordered_json::array();
  for (std::size_t si = 0; si < spec.ns(); ++si)
    for (std::size_t ui = 0; ui < spec.nu(); ++ui)
      for (std::size_t vi = 0; vi < spec.nv(); ++vi) {
        const double p = spec.joint(si, ui, vi);
        if (p == 0.0) continue;
        ordered_json e;
        e["s"] = tuple_json(si, spec.s.size, spec.n0);
        e["u"] = tuple_json(ui, spec.u.size, spec.n0);
        e["v"] = tuple_json(vi, spec.v.size, spec.n0);
        e["p"] = p;
        side.push_back(std::move(e));
      }
  doc["side_info"] = std::move(side);
  return doc.dump(2) + "\n";
}

std::string capacity_result_json(const CapacityResult& result,
                                 const std::string& spec_name,
                                 bool with_timestamp) {
  ordered_json doc;
  doc["command"] = "capacity";
  doc["spec"] = spec_name;
  doc["capacity_bits_per_use"] = result.capacity_bits_per_use;
  doc["n0"] = result.n0;
  doc["iterations"] = result.iterations;
  doc["gap"] = result.gap;
  doc["converged"] = result.converged;
  doc["optimal_p_t"] = result.optimal_p_t;
  if (with_timestamp) doc["timestamp"] = timestamp_utc();
  return doc.dump(2) + "\n";
}

std::string gm_result_json(const GmResult& result,
                           const std::string& spec_name, bool with_timestamp) {
  ordered_json doc;
  doc["command"] = "gm-capacity";
  doc["spec"] = spec_name;
  doc["capacity_bits_per_use"] = result.capacity_bits_per_use;
  doc["per_u_capacity"] = result.per_u_capacity;
  doc["per_u_optimal_p_x"] = result.per_u_p_x;
  doc["converged"] = result.converged;
  if (with_timestamp) doc["timestamp"] = timestamp_utc();
  return doc.dump(2) + "\n";
}

std::string reduction_report_json(const ReductionReport& report,
                                  const std::string& spec_name,
                                  bool with_timestamp) {
  ordered_json doc;
  doc["command"] = "verify-reduction";
  doc["spec"] = spec_name;
  doc["capacity_strategy_bits_per_use"] = report.capacity_strategy;
  doc["gm_applicable"] = report.gm_applicable;
  if (report.gm_applicable) {
    doc["capacity_multiplexed_bits_per_use"] = report.capacity_multiplexed;
    doc["abs_difference"] = report.abs_difference;
    doc["inversion_residual"] = report.inversion_residual;
    doc["inversion_rate_bits"] = report.inversion_rate_bits;
    doc["inversion_slack"] = report.inversion_slack;
  }
  doc["solvers_converged"] = report.solvers_converged;
  ordered_json samples = ordered_json::array();
  for (const auto& s : report.samples) {
    ordered_json e;
    e["i_strategy_bits"] = s.i_strategy_bits;
    e["i_input_bits"] = s.i_input_bits;
    e["upper_slack"] = s.upper_slack;
    e["lower_slack"] = s.lower_slack;
    samples.push_back(std::move(e));
  }
  doc["sandwich_samples"] = std::move(samples);
  ordered_json kmap = ordered_json::array();
  for (std::size_t vi = 0; vi < report.csit_map.k.size(); ++vi) {
    if (!report.csit_map.defined[vi]) continue;
    kmap.push_back({{"v", vi}, {"u", report.csit_map.k[vi]}});
  }
  doc["csit_map"] = std::move(kmap);
  if (with_timestamp) doc["timestamp"] = timestamp_utc();
  return doc.dump(2) + "\n";
}

std::string simulation_report_json(const SimulationReport& report,
                                   const std::string& spec_name,
                                   bool with_timestamp) {
  ordered_json doc;
  doc["command"] = "simulate";
  doc["spec"] = spec_name;
  doc["rate_bits"] = report.rate_bits;
  doc["J"] = report.blocks;
  doc["trials"] = report.trials;
  doc["errors"] = report.errors;
  doc["p_e_hat"] = report.p_e_hat;
  doc["ci_low"] = report.ci_95.low;
  doc["ci_high"] = report.ci_95.high;
  doc["seed"] = report.seed;
  if (with_timestamp) doc["timestamp"] = timestamp_utc();
  return doc.dump(2) + "\n";
}

std::string validation_report_json(const ValidationReport& report,
                                   const std::string& spec_name,
                                   bool with_timestamp) {
  ordered_json doc;
  doc["command"] = "validate";
  doc["spec"] = spec_name;
  doc["valid"] = report.ok();
  ordered_json violations = ordered_json::array();
  for (const auto& v : report.violations)
    violations.push_back({{"where", v.where}, {"what", v.what}});
  doc["violations"] = std::move(violations);
  if (with_timestamp) doc["timestamp"] = timestamp_utc();
  return doc.dump(2) + "\n";
}

std::string simulation_report_csv_row(const SimulationReport& report) {
  std::ostringstream os;
  os << dtos(report.rate_bits) << ',' << report.blocks << ',' << report.trials
     << ',' << report.errors << ',' << dtos(report.p_e_hat) << ','
     << dtos(report.ci_95.low) << ',' << dtos(report.ci_95.high) << ','
     << report.seed;
  return os.str();
}

std::string equivalent_channel_json(const EquivalentChannel& channel) {
  ordered_json doc;
  doc["spec"] = channel.provenance;
  doc["t_count"] = channel.t_count;
  doc["n_outputs"] = channel.n_outputs;
  doc["ny"] = channel.ny;
  doc["nv"] = channel.nv;
  doc["n0"] = channel.n0;
  ordered_json rows = ordered_json::array();
  for (std::size_t t = 0; t < channel.t_count; ++t) {
    ordered_json row = ordered_json::array();
    for (std::size_t o = 0; o < channel.n_outputs; ++o)
      row.push_back(channel.row(t)[o]);
    rows.push_back(std::move(row));
  }
  doc["kernel"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::string equivalent_channel_csv(const EquivalentChannel& channel) {
  std::ostringstream os;
  for (std::size_t t = 0; t < channel.t_count; ++t) {
    for (std::size_t o = 0; o < channel.n_outputs; ++o) {
      if (o) os << ',';
      os << dtos(channel.row(t)[o]);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace bmcap
