#pragma once

#include "canonical.hpp"
#include "constructions.hpp"
#include "dist.hpp"
#include "errors.hpp"
#include "gk.hpp"
#include "json_io.hpp"
#include "lattice.hpp"
#include "rational.hpp"
#include "sid.hpp"
