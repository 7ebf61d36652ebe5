#pragma once

#include <cstddef>

namespace mechlab {

// Single-call discipline: a reduction run must consult its allocation rule
// exactly once. Overloads on the run records forward here.
inline bool enforce_single_call(std::size_t oracle_calls) { return oracle_calls == 1; }

} // namespace mechlab
