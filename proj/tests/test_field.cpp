#include <doctest.h>
#include "tatlab/field.hpp"
