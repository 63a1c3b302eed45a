#pragma once

#include <optional>
#include <string>

#include "kvext/transcript.hpp"

namespace kvext {

/// A reference document and its prediction. `hyp` is empty when the
/// prediction file had no entry for `id`.
struct EvalPair {
  std::string id;
  std::optional<TaggedTranscript> hyp;
  TaggedTranscript ref;
};

}  // namespace kvext
