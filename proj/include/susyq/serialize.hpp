#pragma once

#include <string>

#include <json.hpp>

#include "susyq/circuits.hpp"
#include "susyq/spectral.hpp"
#include "susyq/susycore.hpp"

namespace susyq {

// JSON layouts (ordered keys, round-trip-exact doubles):
//   SparseOperator: {"dim": D, "parity": "...", "entries": [[row, col, re, im], ...]}
//   SusyModel:      {"version": 1, "N": n, "Q": <op>, "P": <op>, "labels": {...}}
//   plus report serializers used by the CLI.

nlohmann::ordered_json operator_to_json(const SparseOperator& op);
SparseOperator operator_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json model_to_json(const SusyModel& model);
SusyModel model_from_json(const nlohmann::ordered_json& j);

SusyModel load_model_file(const std::string& path);
void save_model_file(const SusyModel& model, const std::string& path);

nlohmann::ordered_json validation_to_json(const ValidationReport& r);
nlohmann::ordered_json spectral_to_json(const SpectralReport& r);
nlohmann::ordered_json sample_to_json(const SampleRecord& r);

}  // namespace susyq
