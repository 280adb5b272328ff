#ifndef SEMIMETRIC_SEMIMETRIC_HPP
#define SEMIMETRIC_SEMIMETRIC_HPP

#include "constants.hpp"
#include "doubling.hpp"
#include "embed.hpp"
#include "errors.hpp"
#include "generate.hpp"
#include "io.hpp"
#include "remetrize.hpp"
#include "report.hpp"
#include "set_cover.hpp"
#include "space.hpp"

#endif
