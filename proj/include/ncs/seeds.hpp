#pragma once

#include <cstdint>
#include <string_view>

namespace ncs {

// Counter-derived seeds, so a stream depends only on (base, index) and never
// on evaluation order.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t base, std::string_view label);

} // namespace ncs
