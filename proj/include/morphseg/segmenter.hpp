#pragma once

#include <memory>
#include <string>

#include "morphseg/core.hpp"

namespace morphseg {

// Common surface of all trainable word segmenters: given a word, produce
// a Segmentation. Implementations are immutable after construction and
// safe to share between threads.
class Segmenter {
 public:
  virtual ~Segmenter() = default;

  virtual std::string kind() const = 0;
  virtual const std::string& language() const = 0;
  virtual Segmentation segment(const std::string& word) const = 0;
};

}  // namespace morphseg
