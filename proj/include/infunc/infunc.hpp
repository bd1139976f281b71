#pragma once

#include "infunc/numeric.hpp"
#include "infunc/core.hpp"
#include "infunc/bits.hpp"
#include "infunc/transcript.hpp"
#include "infunc/prefix_code.hpp"
#include "infunc/two_node_coding.hpp"
#include "infunc/tree_coding.hpp"
#include "infunc/dag_rate_region.hpp"
#include "infunc/interactive.hpp"
#include "infunc/tree_protocol.hpp"
#include "infunc/lp.hpp"
#include "infunc/graph_aggregation.hpp"
