// Copyright (c) the treemi contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

#include "treemi/formula.hpp"
#include "treemi/wmi.hpp"

namespace treemi {

// Full document parse; accepts Boolean declarations and weight forms.
WmiProblem parse_wmi(std::string_view text);

}  // namespace treemi
