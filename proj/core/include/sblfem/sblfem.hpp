#pragma once

#include "sblfem/approximation.hpp"
#include "sblfem/assembly.hpp"
#include "sblfem/basis.hpp"
#include "sblfem/errors.hpp"
#include "sblfem/harness.hpp"
#include "sblfem/mesh.hpp"
#include "sblfem/problem.hpp"
#include "sblfem/report.hpp"
