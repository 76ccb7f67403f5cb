#include "primevar/kernels.hpp"

namespace primevar::kernels {

const Funcs* avx2_impl();  // defined in kernels_avx2.cpp

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return avx2_impl() != nullptr && __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const Funcs* avx2() { return avx2_available() ? avx2_impl() : nullptr; }

const Funcs& active() {
  static const Funcs* chosen = avx2_available() ? avx2_impl() : &scalar();
  return *chosen;
}

}  // namespace primevar::kernels
