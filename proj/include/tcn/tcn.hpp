#ifndef TCN_TCN_HPP
#define TCN_TCN_HPP

#include "tcn/bounds.hpp"
#include "tcn/decompose.hpp"
#include "tcn/equivalence.hpp"
#include "tcn/error.hpp"
#include "tcn/frontend.hpp"
#include "tcn/interval.hpp"
#include "tcn/model.hpp"
#include "tcn/oracle.hpp"
#include "tcn/preprocess.hpp"
#include "tcn/propagation.hpp"
#include "tcn/search.hpp"
#include "tcn/ternary.hpp"

#endif
