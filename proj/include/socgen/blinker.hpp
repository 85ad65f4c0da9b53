// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "socgen/fhdl.hpp"

namespace socgen {

/// int(sys_clk_freq * period / 2)
int64_t blinker_preload(double sys_clk_freq, double period);

/// Decrementing counter that toggles `led` every time it reaches zero.
class Blinker : public Module {
 public:
  explicit Blinker(int64_t preload);
  Blinker(double sys_clk_freq, double period) : Blinker(blinker_preload(sys_clk_freq, period)) {}

  Signal led{"led"};
  Signal toggle{"toggle"};
  Signal counter;
  int64_t preload;
};

}  // namespace socgen
