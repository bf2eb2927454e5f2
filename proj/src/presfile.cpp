#include "exactalg.hpp"
