/*
 * Copyright (c) 2026 The ORFEL Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>

#include "orfel/attack_gen.hpp"
#include "orfel/engine.hpp"

namespace orfel {

nlohmann::json report_to_json(const DetectionReport& report);
DetectionReport report_from_json(const nlohmann::json& j);
void write_report(const DetectionReport& report, const std::filesystem::path& path);
DetectionReport read_report(const std::filesystem::path& path);

nlohmann::json ground_truth_to_json(const NamedGroundTruth& truth, const AttackSpec* spec,
                                    uint64_t rng_seed);
NamedGroundTruth ground_truth_from_json(const nlohmann::json& j);
void write_ground_truth(const NamedGroundTruth& truth, const AttackSpec* spec,
                        uint64_t rng_seed, const std::filesystem::path& path);
NamedGroundTruth read_ground_truth(const std::filesystem::path& path);

AttackSpec attack_spec_from_json(const nlohmann::json& j);

nlohmann::json recall_to_json(const RecallResult& result);

nlohmann::json manifest_to_json(const GraphManifest& m);
GraphManifest manifest_from_json(const nlohmann::json& j);

}  // namespace orfel
