#include <doctest.h>
#include "tatlab/dynamics.hpp"
