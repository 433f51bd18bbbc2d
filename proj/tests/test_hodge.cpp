#include <doctest.h>
#include "tatlab/hodge.hpp"
