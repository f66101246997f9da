#pragma once

// Umbrella header.

#include "sareg/colorings.hpp"
#include "sareg/cutting.hpp"
#include "sareg/distances.hpp"
#include "sareg/graph.hpp"
#include "sareg/interval.hpp"
#include "sareg/json_io.hpp"
#include "sareg/parallel.hpp"
#include "sareg/point.hpp"
#include "sareg/polynomial.hpp"
#include "sareg/ramsey.hpp"
#include "sareg/rational.hpp"
#include "sareg/regularity.hpp"
#include "sareg/relation.hpp"
#include "sareg/roots.hpp"
#include "sareg/rt.hpp"
