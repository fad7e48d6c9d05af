export {
    ApiClient,
    ApiError,
    type ClusterInfo,
    type ClusterRunResponse,
    type ConceptsResponse,
    type FetchLike,
    type HistogramResponse,
    type Point,
    type VersionResponse,
} from "./api.js";
export { Studio, type ClusterPanel } from "./app.js";
export { lassoSelect, pointInPolygon, type Vertex } from "./lasso.js";
export {
    histogramView,
    scatterMarks,
    tooltipText,
    type HistogramView,
    type Mark,
    type Viewport,
} from "./scatter.js";
export { categoriesFor, colorFor, ViewState, type ColorBy } from "./state.js";
