#pragma once

#include <span>

#include "discarg/corpus.hpp"
#include "discarg/rst.hpp"

namespace discarg {

// Lifts an ADU-level argument tree onto EDUs. RST arcs inside an ADU become
// SameArg arcs; the ADU's head EDU (the one whose RST head lies outside the
// ADU, preferring the shallowest, then leftmost) carries the ADU's own arc
// to the head EDU of its parent ADU. Further EDUs whose RST head lies
// outside their ADU attach to the ADU's head EDU with SameArg.
ArgumentTree attach_same_arg(const RstDependencies& edu_deps, std::span<const Span> edus,
                             std::span<const DiscourseUnit> adus, const ArgumentTree& adu_tree);

}  // namespace discarg
