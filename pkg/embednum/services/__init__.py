"""embednum services package"""
