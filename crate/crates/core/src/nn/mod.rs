//! Dense layers with hand-written backward passes.

mod activation;
mod affine;
mod conv;
mod count;
#[cfg(test)]
pub(crate) mod fdcheck;
mod init;
mod loss;
mod lstm;
mod tensor;

pub use activation::{dropout, relu, relu_backward, sigmoid, softmax};
pub use affine::{affine_backward, affine_forward, Linear};
pub use conv::{conv_backward, conv_forward, conv_maxpool, ConvCache, ConvParams, ConvSpec};
pub use count::{count_parameters, ArchSpec};
pub use init::{glorot, uniform_fill};
pub use loss::{binary_cross_entropy, cross_entropy};
pub use lstm::{
    bilstm_backward, bilstm_encode, bilstm_forward, lstm_step, BiLstmCache, LstmDirection,
    LstmParams,
};
pub use tensor::{Parameters, Tensor};
