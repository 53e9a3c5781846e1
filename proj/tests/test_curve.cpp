#include <doctest.h>
#include "trpca/curve.hpp"
