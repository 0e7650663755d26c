#pragma once

#include "phasekit/classrep.hpp"
#include "phasekit/coherent.hpp"
#include "phasekit/dequant.hpp"
#include "phasekit/displacement.hpp"
#include "phasekit/dynamics.hpp"
#include "phasekit/error.hpp"
#include "phasekit/fock.hpp"
#include "phasekit/frame.hpp"
#include "phasekit/grid.hpp"
#include "phasekit/io.hpp"
#include "phasekit/linalg.hpp"
#include "phasekit/params.hpp"
#include "phasekit/random.hpp"
