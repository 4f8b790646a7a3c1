/*
 *            Copyright 2026 The qed1d Development Team
 *
 *      Licensed under the Apache License, Version 2.0 (the "License")
 *
 * You may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *              http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#pragma once
#ifndef QED1D_QED1D_HPP
#define QED1D_QED1D_HPP

#include "core.hpp"
#include "quadrature.hpp"
#include "distribution.hpp"
#include "parallel.hpp"
#include "exact_model.hpp"
#include "vacuum_density.hpp"
#include "planewave.hpp"
#include "qed_shift.hpp"
#include "appendix_checks.hpp"

#endif  // QED1D_QED1D_HPP
