#include <doctest.h>
#include "tatlab/paths.hpp"
