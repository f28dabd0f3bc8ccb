#ifndef CAPLAB_CAPLAB_HPP
#define CAPLAB_CAPLAB_HPP

#include "capacity.hpp"
#include "core.hpp"
#include "io.hpp"
#include "julia.hpp"
#include "lp_engine.hpp"
#include "measures.hpp"
#include "menger.hpp"
#include "motion.hpp"
#include "parallel.hpp"
#include "props.hpp"
#include "sampling.hpp"
#include "sets.hpp"
#include "transforms.hpp"

#endif  // CAPLAB_CAPLAB_HPP
