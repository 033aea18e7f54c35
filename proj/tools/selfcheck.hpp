#pragma once

namespace momentsense::tools {

// Runs the built-in analytic cross-check battery (delta-method variance vs
// the closed forms, Q/Q^{-1} round trip, SRRC structure, H0 statistic
// variance) and prints one line per check. Returns true when every check
// passes.
bool run_selfcheck();

}  // namespace momentsense::tools
