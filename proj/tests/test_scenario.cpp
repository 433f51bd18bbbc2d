#include <doctest.h>
#include "tatlab/scenario.hpp"
