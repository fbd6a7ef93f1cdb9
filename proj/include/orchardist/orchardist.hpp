#pragma once

#include "orchardist/bench.hpp"
#include "orchardist/classes.hpp"
#include "orchardist/core.hpp"
#include "orchardist/errors.hpp"
#include "orchardist/formats.hpp"
#include "orchardist/gen.hpp"
#include "orchardist/labelling.hpp"
#include "orchardist/solver.hpp"
