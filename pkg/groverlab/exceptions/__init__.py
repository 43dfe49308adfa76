# Custom exceptions
