#pragma once

#include "amgm/bounds.hpp"
#include "amgm/errors.hpp"
#include "amgm/holder.hpp"
#include "amgm/means.hpp"
#include "amgm/random.hpp"
#include "amgm/sharpness.hpp"
#include "amgm/summation.hpp"
#include "amgm/version.hpp"
