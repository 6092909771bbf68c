#pragma once

#include "prdsim/errors.hpp"
#include "prdsim/field/complex_field.hpp"
#include "prdsim/field/grid.hpp"
#include "prdsim/field/kernel.hpp"
#include "prdsim/field/optics.hpp"
#include "prdsim/field/pgm.hpp"
#include "prdsim/field/propagate.hpp"
#include "prdsim/field/transmittance.hpp"
#include "prdsim/cascade/chain.hpp"
#include "prdsim/cascade/ledger.hpp"
#include "prdsim/interferometer/coherent.hpp"
#include "prdsim/interferometer/correlation.hpp"
#include "prdsim/interferometer/ports.hpp"
#include "prdsim/interferometer/spec.hpp"
#include "prdsim/ensemble/ensemble.hpp"
#include "prdsim/metrics.hpp"
