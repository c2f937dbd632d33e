#pragma once

// Class profiles of the enumerated stream: for lambda in {1, -1}, every pair
// (class(x), class(lambda - x)) realized by a nonzero x with lambda - x
// nonzero, keyed to the least slot realizing it. Every "for all x" condition
// that only reads class(x) and class(1 - x) (lambda = 1) or class(x) and
// class(1 + x) (lambda = -1, since -1 lies in T) is decided from a profile.

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "valdetect/field.hpp"
#include "valdetect/window.hpp"

namespace valdetect {

struct Profile {
  std::size_t rank = 0;
  // class(x) followed by class(lambda - x), ordered by least slot.
  std::vector<std::pair<ClassVec, std::uint64_t>> pairs;
  // class(x) over nonzero x, ordered by least slot.
  std::vector<std::pair<ClassVec, std::uint64_t>> first_class;
  std::uint64_t slots = 0;
  // Every pair realized by some element of the field occurs in the stream.
  bool complete = false;
};

enum class ScanMode { Fast, Serial };

// Literal enumeration with generic field arithmetic.
Profile profile_serial(const Window& w, const Height& h, int lambda);
// OpenMP kernel on rational function layers and the structural profile on
// series layers; agrees with profile_serial.
Profile profile_fast(const Window& w, const Height& h, int lambda);
// Cached per (field, window, height, lambda, mode).
std::shared_ptr<const Profile> profile(const Window& w, const Height& h, int lambda,
                                       ScanMode mode = ScanMode::Fast);

// Worker cap for parallel kernels; 0 restores the OpenMP default.
void set_jobs(int jobs);

}  // namespace valdetect
