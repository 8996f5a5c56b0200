#pragma once

#include "ubp/arcset.hpp"
#include "ubp/bitgrid.hpp"
#include "ubp/blocks.hpp"
#include "ubp/covering.hpp"
#include "ubp/droplet.hpp"
#include "ubp/engine.hpp"
#include "ubp/errors.hpp"
#include "ubp/family.hpp"
#include "ubp/geometry.hpp"
#include "ubp/growth.hpp"
#include "ubp/json_io.hpp"
#include "ubp/montecarlo.hpp"
#include "ubp/sparse.hpp"
#include "ubp/stable_set.hpp"
#include "ubp/ublock.hpp"
