#pragma once

namespace phi4 {

// Thread count used by the OpenMP kernels. 0 leaves the runtime default.
void set_threads(int n);
int threads();

}  // namespace phi4
