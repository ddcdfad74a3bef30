#pragma once

// Umbrella header: exact computation in free metabelian groups through the
// Magnus matrix representation.

#include "laurent.hpp"
#include "magnus.hpp"
#include "nilquot.hpp"
#include "random.hpp"
#include "subgroup.hpp"
#include "words.hpp"
