#pragma once

#include <string>

#include "vsq/boxes.hpp"
#include "vsq/core.hpp"

namespace vsq::io {

/// Scenario document: {"hypotheses": [names], "p": [reals],
/// "partitions": [{"name"?, "plus": [names], "minus": [names],
/// "zero"?: [names]}, ...]}. Validation failures name the offending field
/// or hypothesis.
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);

/// Box scenario document: {"hypotheses"?: [names],
/// "boxes": [[x_min, x_max, y_min, y_max], ...], "p": [reals],
/// "positives"?: [[x, y], ...], "negatives"?: [[x, y], ...]}.
boxes::BoxScenario parse_box_scenario(const std::string& json_text);
boxes::BoxScenario load_box_scenario(const std::string& path);

/// 64-bit FNV-1a of the file contents as lowercase hex; embedded in
/// reports so results stay traceable to their inputs.
std::string file_digest(const std::string& path);

}  // namespace vsq::io
