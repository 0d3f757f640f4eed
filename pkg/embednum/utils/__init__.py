"""embednum utilities package"""
