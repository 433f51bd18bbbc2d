#include <doctest.h>
#include "tatlab/toml_lite.hpp"
