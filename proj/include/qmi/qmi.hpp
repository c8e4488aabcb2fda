// qmi.hpp: umbrella header.

#pragma once

#include "qmi/capacity.hpp"
#include "qmi/channels.hpp"
#include "qmi/convergence.hpp"
#include "qmi/entropy.hpp"
#include "qmi/errors.hpp"
#include "qmi/information.hpp"
#include "qmi/io.hpp"
#include "qmi/operator_core.hpp"
#include "qmi/random.hpp"
#include "qmi/reversibility.hpp"
#include "qmi/suites.hpp"
