#include <doctest.h>
#include "trpca/io.hpp"
