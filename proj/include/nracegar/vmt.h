/*! \file vmt.h
** \brief Symbolic transition systems and the VMT text format.
**/

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "nracegar/term.h"

namespace nracegar {

struct TransitionSystem
{
  TermVec state_vars;  // current-frame variables, declaration order
  Term init;
  Term trans;
  std::map<int, Term> properties;  // keyed by :invar-property index

  /** The property with the given index, or the lowest-indexed one. */
  const Term & property(std::optional<int> index = std::nullopt) const;
};

/** x' for a current-frame variable x. */
Term next_var(const Term & v);

/** Checks the variable-scope invariants of a system; throws SortError. */
void validate(const TransitionSystem & ts);

TransitionSystem parse_vmt(std::string_view text);
std::string serialize_vmt(const TransitionSystem & ts);

}  // namespace nracegar
