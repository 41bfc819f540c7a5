#pragma once

#include <string>
#include <vector>

#include "stirap/scenario.hpp"

namespace stirap {

// Built-in scenarios, one per standard figure of the study.
struct PresetInfo {
    std::string name;
    std::string summary;
    Scenario scenario;
};

const std::vector<PresetInfo>& preset_catalog();

// nullptr when nothing matches; unique name prefixes are accepted and a
// leading "figures/" is ignored.
const PresetInfo* find_preset(const std::string& name);

// An existing file wins over a preset of the same name.
Scenario find_scenario(const std::string& name_or_path);

} // namespace stirap
