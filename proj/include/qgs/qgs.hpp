#pragma once

#include "qgs/bethe_solver.hpp"
#include "qgs/errors.hpp"
#include "qgs/fd_oracle.hpp"
#include "qgs/graph.hpp"
#include "qgs/graph_io.hpp"
#include "qgs/interval_bethe.hpp"
#include "qgs/relations.hpp"
#include "qgs/scattering.hpp"
#include "qgs/secular.hpp"
#include "qgs/tensor_ops.hpp"
#include "qgs/weyl.hpp"
