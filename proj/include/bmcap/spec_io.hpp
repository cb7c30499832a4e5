#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "bmcap/capacity.hpp"
#include "bmcap/channel_model.hpp"
#include "bmcap/coding_sim.hpp"
#include "bmcap/gm_reduction.hpp"

namespace bmcap {

// Spec files are JSON documents with explicit tuple keys; the parser performs
// the mixed-radix flattening exactly once. Omitted entries are zero. See the
// README for the schema.
BlockChannelSpec parse_spec(const std::filesystem::path& path);
BlockChannelSpec parse_spec_text(std::string_view text,
                                 std::string_view origin = "<string>");

// Structural parse only; the caller runs validate_spec and decides what to
// do with the report.
BlockChannelSpec parse_spec_unvalidated(const std::filesystem::path& path);

// Canonical serialization; parse_spec of the output reproduces the tables
// bit-for-bit.
std::string serialize_spec(const BlockChannelSpec& spec);

std::string capacity_result_json(const CapacityResult& result,
                                 const std::string& spec_name,
                                 bool with_timestamp = true);
std::string gm_result_json(const GmResult& result, const std::string& spec_name,
                           bool with_timestamp = true);
std::string reduction_report_json(const ReductionReport& report,
                                  const std::string& spec_name,
                                  bool with_timestamp = true);
std::string simulation_report_json(const SimulationReport& report,
                                   const std::string& spec_name,
                                   bool with_timestamp = true);
std::string validation_report_json(const ValidationReport& report,
                                   const std::string& spec_name,
                                   bool with_timestamp = true);

inline constexpr const char* kSweepCsvHeader =
    "rate,J,trials,errors,p_e_hat,ci_low,ci_high,seed";
std::string simulation_report_csv_row(const SimulationReport& report);

// Matrix export: rows are strategies in canonical order, columns (y, v)
// tuples in mixed-radix order.
std::string equivalent_channel_json(const EquivalentChannel& channel);
std::string equivalent_channel_csv(const EquivalentChannel& channel);

}  // namespace bmcap
