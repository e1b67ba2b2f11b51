// Copyright (c) the treemi contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include <json.hpp>

#include "treemi/engine.hpp"
#include "treemi/graph.hpp"
#include "treemi/poly.hpp"

namespace treemi {

// All rationals serialize as "p/q" strings; round trips are bit-exact.
nlohmann::json to_json(const PiecewisePoly& pw);
PiecewisePoly piecewise_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Problem& p);
nlohmann::json to_json(const GraphStats& s);

nlohmann::json to_json(const BeliefTable& t, const Problem& p);
BeliefTable belief_table_from_json(const nlohmann::json& j, const Problem& p);

// Stable fingerprint of the canonical problem text plus the chosen root;
// guards offline belief-table reuse. FNV-1a, 64 bit.
std::uint64_t problem_fingerprint(const Problem& p, VarId root);

}  // namespace treemi
