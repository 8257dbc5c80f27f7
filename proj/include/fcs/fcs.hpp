#pragma once

// Umbrella header: full counting statistics of identical wave packets on a
// multichannel scatterer.

#include "fcs/channels.hpp"
#include "fcs/config.hpp"
#include "fcs/counting.hpp"
#include "fcs/errors.hpp"
#include "fcs/linalg.hpp"
#include "fcs/matrix.hpp"
#include "fcs/overlap.hpp"
#include "fcs/presets.hpp"
#include "fcs/quadrature.hpp"
#include "fcs/scatterer.hpp"
#include "fcs/serialize.hpp"
#include "fcs/sweep.hpp"
#include "fcs/wavepacket.hpp"
