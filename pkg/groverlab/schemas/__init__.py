# Pydantic records
