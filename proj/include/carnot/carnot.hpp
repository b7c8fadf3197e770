#pragma once

// Umbrella header.

#include "carnot/errors.hpp"
#include "carnot/rational.hpp"
#include "carnot/lie_core.hpp"
#include "carnot/bch.hpp"
#include "carnot/group_models.hpp"
#include "carnot/metric.hpp"
#include "carnot/contact_analysis.hpp"
#include "carnot/rectifiability.hpp"
#include "carnot/isomorphisms.hpp"
#include "carnot/io.hpp"
