#pragma once

#include "qtomo/bootstrap.hpp"
#include "qtomo/dispersion.hpp"
#include "qtomo/entanglement.hpp"
#include "qtomo/error.hpp"
#include "qtomo/io/csv.hpp"
#include "qtomo/io/report.hpp"
#include "qtomo/nonlocality.hpp"
#include "qtomo/optimize.hpp"
#include "qtomo/polarimetry.hpp"
#include "qtomo/random.hpp"
#include "qtomo/source_sim.hpp"
#include "qtomo/state.hpp"
#include "qtomo/tomography.hpp"
