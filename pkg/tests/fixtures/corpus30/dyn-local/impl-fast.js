module.exports = function () { return "fast"; };
