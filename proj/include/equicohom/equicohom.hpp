#pragma once

#include "equicohom/errors.hpp"
#include "equicohom/zmodule.hpp"
#include "equicohom/simplicial.hpp"
#include "equicohom/group.hpp"
#include "equicohom/equivariant.hpp"
#include "equicohom/localsys.hpp"
#include "equicohom/cohomology.hpp"
#include "equicohom/classify.hpp"
#include "equicohom/bundle.hpp"
