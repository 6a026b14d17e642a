#pragma once

#include "quatmatch/error.hpp"
#include "quatmatch/exactnum/cyclotomic.hpp"
#include "quatmatch/exactnum/dft.hpp"
#include "quatmatch/exactnum/rational.hpp"
#include "quatmatch/exactnum/symbols.hpp"
#include "quatmatch/quatalg/algebra.hpp"
#include "quatmatch/orders/lattice.hpp"
#include "quatmatch/orders/orders.hpp"
#include "quatmatch/classsets/enumerate.hpp"
#include "quatmatch/classsets/ideals.hpp"
#include "quatmatch/classsets/classset.hpp"
#include "quatmatch/classsets/cache.hpp"
#include "quatmatch/heckedeg/heckedeg.hpp"
#include "quatmatch/weilmatch/weil.hpp"
#include "quatmatch/verify/verify.hpp"
