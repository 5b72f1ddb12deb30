#pragma once

#include "discarg/corpus.hpp"

namespace discarg {

// Assigns dialectical roles top-down: the central claim is Pro, an Attack
// arc flips the role of its head, Support and SameArg keep it.
ArgumentTree infer_roles(ArgumentTree tree);

}  // namespace discarg
