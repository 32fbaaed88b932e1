#pragma once

#include <cstdlib>

#include "dqd/gates.hpp"
#include "dqd/library.hpp"
#include "dqd/kernels.hpp"

namespace fixture {

// Standard gate set compiled once per test process with default options.
inline const dqd::library::GateLibrary& compiled_library() {
  static const dqd::library::GateLibrary lib = [] {
    const auto& names = dqd::gates::standard_names();
    std::vector<dqd::library::CompiledGate> compiled(names.size());
    dqd::kernels::for_each_index(names.size(), [&](std::size_t i) {
      compiled[i] = dqd::library::compile_standard(names[i]);
    });
    dqd::library::GateLibrary out;
    for (auto& g : compiled) out.add(std::move(g));
    return out;
  }();
  return lib;
}

// The library prebuilt by the ctest setup step (DQD_TEST_LIBRARY), or a fresh
// compile when the file is not available.
inline const dqd::library::GateLibrary& standard_library() {
  static const dqd::library::GateLibrary lib = [] {
    if (const char* path = std::getenv("DQD_TEST_LIBRARY")) {
      try {
        return dqd::library::load(path);
      } catch (const std::exception&) {
      }
    }
    return compiled_library();
  }();
  return lib;
}

}  // namespace fixture
