#pragma once

#include <cstddef>

// Process-wide allocation accounting: global operator new/delete and GMP's
// allocator both report here. Defined in alloc_tracker.cpp.
namespace modforms::alloc_tracker {

void install_gmp_hooks();
void reset_peak();
std::size_t peak_bytes();
std::size_t current_bytes();

}  // namespace modforms::alloc_tracker
