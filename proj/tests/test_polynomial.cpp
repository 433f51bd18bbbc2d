#include <doctest.h>
#include "tatlab/polynomial.hpp"
