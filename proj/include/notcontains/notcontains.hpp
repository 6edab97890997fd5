#pragma once

#include "notcontains/word.hpp"
#include "notcontains/automata.hpp"
#include "notcontains/regex.hpp"
#include "notcontains/constraints.hpp"
#include "notcontains/flatsolver.hpp"
#include "notcontains/classify.hpp"
#include "notcontains/twosided.hpp"
#include "notcontains/gamma.hpp"
#include "notcontains/refute.hpp"
#include "notcontains/oracle.hpp"
#include "notcontains/driver.hpp"
#include "notcontains/io.hpp"
