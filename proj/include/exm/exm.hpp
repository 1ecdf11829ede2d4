#pragma once

#include "exm/error.hpp"
#include "exm/integral.hpp"
#include "exm/intervals.hpp"
#include "exm/measure.hpp"
#include "exm/parse.hpp"
#include "exm/rational.hpp"
#include "exm/simplefn.hpp"
#include "exm/structures.hpp"
#include "exm/xreal.hpp"
