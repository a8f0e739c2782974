#pragma once

#include "topmix/artifacts.hpp"
#include "topmix/assignment.hpp"
#include "topmix/diagram_metric.hpp"
#include "topmix/error.hpp"
#include "topmix/evaluation.hpp"
#include "topmix/ingestion.hpp"
#include "topmix/knn.hpp"
#include "topmix/parallel.hpp"
#include "topmix/persistence.hpp"
#include "topmix/pipeline.hpp"
#include "topmix/pointcloud.hpp"
#include "topmix/preprocessing.hpp"
#include "topmix/report.hpp"
#include "topmix/square_matrix.hpp"
