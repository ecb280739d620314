#pragma once

#include "mvproj/rational.hpp"
#include "mvproj/geometry.hpp"
#include "mvproj/pwl1d.hpp"
#include "mvproj/pwl2d.hpp"
#include "mvproj/chain.hpp"
#include "mvproj/term.hpp"
#include "mvproj/iso_range.hpp"
#include "mvproj/projectivity.hpp"
#include "mvproj/builders.hpp"
#include "mvproj/io.hpp"
#include "mvproj/svg.hpp"
