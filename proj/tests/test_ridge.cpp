#include <doctest.h>
#include "trpca/ridge.hpp"
