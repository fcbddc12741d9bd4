from .image_encoder import IMAGE_LATENT_CHANNELS, ImageLatentEncoder, encode_image, image_to_tensor
from .label_codec import LATENT_FACTOR, decode_label, encode_label, encode_labels
from .label_decoder import LabelAutoencoderReport, LabelDecoder, train_label_autoencoder

__all__ = [
    "IMAGE_LATENT_CHANNELS",
    "LATENT_FACTOR",
    "ImageLatentEncoder",
    "LabelAutoencoderReport",
    "LabelDecoder",
    "decode_label",
    "encode_image",
    "encode_label",
    "encode_labels",
    "image_to_tensor",
    "train_label_autoencoder",
]
