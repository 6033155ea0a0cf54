#pragma once

#include "kgroth/rational.hpp"
#include "kgroth/poly.hpp"
#include "kgroth/perm.hpp"
#include "kgroth/pipedream.hpp"
#include "kgroth/tableaux.hpp"
#include "kgroth/grothendieck.hpp"
#include "kgroth/hecke_sp.hpp"
#include "kgroth/raising.hpp"
#include "kgroth/o_groth.hpp"
#include "kgroth/stable_sym.hpp"
#include "kgroth/json_io.hpp"
#include "kgroth/verify.hpp"
