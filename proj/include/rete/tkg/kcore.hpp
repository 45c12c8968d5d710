#pragma once

#include "rete/tkg/types.hpp"

namespace rete {

/// Iteratively drops users, products and queries that take part in fewer than
/// `min_interactions` events (with their events) until a fixpoint is reached.
/// Attributes are never filtered. Surviving entities are re-numbered densely,
/// keeping their relative order; the relation registry is unchanged.
EventLog k_core_filter(const EventLog& log, std::size_t min_interactions);

}  // namespace rete
