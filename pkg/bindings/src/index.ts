/**
 * mixmetric-bindings: typed access to the mixmetric core over its
 * command-line interface and document formats.
 */

export {
  bind_distance,
  bind_fit,
  bind_matrix,
  bind_predict,
  bind_release,
} from "./bindings.js";
export { BindingError, CoreError, HandleError, ProtocolError } from "./errors.js";
export { int, nil, real, text } from "./values.js";
export type {
  Cell,
  Handle,
  Int,
  Matrix,
  MatrixPayload,
  Null,
  Prediction,
  PredictionPayload,
  Real,
  Text,
} from "./values.js";
