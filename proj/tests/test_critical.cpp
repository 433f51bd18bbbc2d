#include <doctest.h>
#include "tatlab/critical.hpp"
