#ifndef FRACSUM_FRACSUM_HPP
#define FRACSUM_FRACSUM_HPP

#include "fracsum/asymptotics.hpp"
#include "fracsum/blocks.hpp"
#include "fracsum/check.hpp"
#include "fracsum/direct.hpp"
#include "fracsum/params.hpp"
#include "fracsum/periodic.hpp"
#include "fracsum/rational.hpp"
#include "fracsum/real.hpp"
#include "fracsum/scan.hpp"
#include "fracsum/series.hpp"

#endif
