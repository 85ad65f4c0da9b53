// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

namespace socgen {

/// Verilog-2001 reserved words. Lowered names never collide with these.
bool is_verilog_keyword(std::string_view word);

}  // namespace socgen
