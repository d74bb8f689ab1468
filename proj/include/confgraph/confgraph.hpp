#pragma once

// Everything except the JSON renderings, which need nlohmann/json.

#include "confgraph/graph.hpp"
#include "confgraph/independence.hpp"
#include "confgraph/engine.hpp"
#include "confgraph/oracle.hpp"
#include "confgraph/dsl.hpp"
