#pragma once

#include "permod/binary_field.hpp"
#include "permod/error.hpp"
#include "permod/gf2poly.hpp"
#include "permod/graph.hpp"
#include "permod/hafnian.hpp"
#include "permod/io.hpp"
#include "permod/linalg_f.hpp"
#include "permod/matrix.hpp"
#include "permod/parallel.hpp"
#include "permod/permanent.hpp"
#include "permod/ring.hpp"
#include "permod/sdc.hpp"
#include "permod/zpoly.hpp"
