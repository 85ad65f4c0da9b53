// SPDX-License-Identifier: Apache-2.0
#include "socgen/blinker.hpp"

#include <fmt/format.h>

namespace socgen {

int64_t blinker_preload(double sys_clk_freq, double period) {
  const double half = sys_clk_freq * period / 2;
  if (!(half >= 0) || half > 9.0e18) {
    throw ConstructionError(fmt::format("blinker preload out of range for {} Hz and {} s", sys_clk_freq, period));
  }
  return static_cast<int64_t>(half);
}

Blinker::Blinker(int64_t preload_)
    : counter(make_signal("counter", MaxValue{preload_ + 1})), preload(preload_) {
  comb(toggle.eq(counter == 0));
  sync(If(toggle, {led.eq(~led), counter.eq(preload)}).Else({counter.eq(counter - 1)}));
}

}  // namespace socgen
