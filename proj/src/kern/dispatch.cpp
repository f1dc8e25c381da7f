// Copyright 2026 opnb toolkit contributors
// Licensed under the Apache License, Version 2.0

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "opnb/kern/kernels.hpp"

namespace opnb::kern {

#if defined(OPNB_WITH_AVX2)
const Ops* avx2_ops_impl();
#endif

const Ops* avx2_ops() {
#if defined(OPNB_WITH_AVX2)
  return avx2_ops_impl();
#else
  return nullptr;
#endif
}

namespace {

const Ops* pick() {
  if (const char* env = std::getenv("OPNB_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return &scalar_ops();
    if (std::strcmp(env, "avx2") == 0) {
      if (const Ops* v = avx2_ops()) return v;
    }
  }
  if (const Ops* v = avx2_ops()) return v;
  return &scalar_ops();
}

std::atomic<const Ops*> g_ops{nullptr};

}  // namespace

const Ops& ops() {
  const Ops* cur = g_ops.load(std::memory_order_acquire);
  if (!cur) {
    cur = pick();
    g_ops.store(cur, std::memory_order_release);
  }
  return *cur;
}

bool force_backend(const char* name) {
  if (std::strcmp(name, "scalar") == 0) {
    g_ops.store(&scalar_ops(), std::memory_order_release);
    return true;
  }
  if (std::strcmp(name, "avx2") == 0) {
    if (const Ops* v = avx2_ops()) {
      g_ops.store(v, std::memory_order_release);
      return true;
    }
  }
  return false;
}

}  // namespace opnb::kern
