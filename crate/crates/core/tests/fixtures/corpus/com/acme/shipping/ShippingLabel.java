package com.acme.shipping;

import com.acme.model.Customer;
import com.acme.model.Order;

/** Mostly strings and numbers. */
public class ShippingLabel {
    private String street;
    private String houseNumber;
    private String city;
    private String postalCode;
    private String region;
    private String country;
    private String carrier;
    private String trackingCode;
    private int weightGrams;
    private int widthMm;
    private int heightMm;
    private int depthMm;
    private boolean fragile;
    private boolean express;
    private double insuredValue;
    private Integer parcelCount;
    private Customer recipient;
    private Order order;

    public ShippingLabel(Customer recipient, Order order) {
        this.recipient = recipient;
        this.order = order;
    }

    public String format() {
        return street + " " + houseNumber + "\n" + postalCode + " " + city;
    }
}
