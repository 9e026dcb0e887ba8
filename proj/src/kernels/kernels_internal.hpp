#pragma once

#include "techconv/kernels.hpp"

namespace techconv::kernels::detail {

extern const KernelTable kScalarTable;
#if defined(TECHCONV_HAVE_AVX2_KERNELS)
extern const KernelTable kAvx2Table;
#endif

}  // namespace techconv::kernels::detail
